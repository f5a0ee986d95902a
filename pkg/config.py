"""
Configuration for the real curve pair toolkit
"""
import os
from dotenv import load_dotenv

# Load optional overrides from .env file
load_dotenv()

# Logging
LOG_LEVEL = os.getenv('REALPAIRS_LOG_LEVEL', 'WARNING')
LOG_FILE = os.getenv('REALPAIRS_LOG_FILE')  # No file handler when unset

# Data files
DATA_DIR = os.getenv('REALPAIRS_DATA_DIR', os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data'))
GOLDEN_TABLE_PATH = os.path.join(DATA_DIR, 'golden_table.json')

# Table enumeration
DEFAULT_BOUND = int(os.getenv('REALPAIRS_BOUND', '10'))  # crosscaps + 2*genus of the ambient surface
DEFAULT_E_MIN = -2
DEFAULT_E_MAX = 8
MIN_FAMILY_INSTANCES = 3  # instances needed before a parametric family is fitted

# Diffeomorphism table verification
DIFFEO_R_MAX = 8  # algebraic check
ORACLE_R_MAX = 3  # cell complex check
ORACLE_WORD_COMPLEXITY = 8  # exhaustive normalize vs oracle sweep

# Sampling
WITNESS_SAMPLE_SIZE = 200
ROUND_TRIP_SAMPLES = 1000
ROUND_TRIP_MAX_STEPS = 12
RANDOM_SEED = int(os.getenv('REALPAIRS_SEED', '20240101'))
