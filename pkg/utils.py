"""
Utility functions for the real curve pair toolkit
"""
import logging
import sys
import time
from functools import wraps

import config

logger = logging.getLogger("realpairs")


# Set up logging
def setup_logging(level=None, log_file=None):
    """
    Configure logging for command-line runs

    Results go to stdout, so the console handler writes to stderr.

    Args:
        level: Logging level name (defaults to config.LOG_LEVEL)
        log_file: Optional log file path (defaults to config.LOG_FILE)

    Returns:
        logging.Logger: The package logger
    """
    level = (level or config.LOG_LEVEL).upper()
    log_file = log_file or config.LOG_FILE

    handlers = []
    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(logging.DEBUG)
        handlers.append(file_handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    handlers.append(console_handler)

    formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    for handler in handlers:
        handler.setFormatter(formatter)

    logging.basicConfig(level=level, handlers=handlers, force=True)
    logger.setLevel(level)
    return logger


class RealPairsError(Exception):
    """Base class for domain errors; the class name is the stable error code"""

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    @property
    def code(self):
        return type(self).__name__

    def to_dict(self):
        """
        Machine-readable form used on stderr by the CLI

        Returns:
            dict: error code, message and details
        """
        return {"error": self.code, "message": self.message, "details": self.details}


def timed(label):
    """
    Decorator that logs the wall time of a call

    Args:
        label: Human readable name for the log line
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start
                logger.info(f"{label} finished in {elapsed:.3f}s")
        return wrapper
    return decorator
