"""
CLI Launcher Script

Run this script to use the real curve pair toolkit from the command line,
e.g. python run_cli.py table --golden
"""
import sys
from utils import logger, setup_logging
from main import main

if __name__ == "__main__":
    setup_logging()
    logger.info("=" * 80)
    logger.info("Starting real curve pair toolkit")
    logger.info("=" * 80)

    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("\nStopped by user")
        sys.exit(1)
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        sys.exit(1)
