#!/usr/bin/env python3
"""
quartic-iso Startup Script
"""
import os
import sys
import traceback

# Add current directory to Python path to ensure correct module import
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from quartic_iso.main import main  # noqa: E402
from quartic_iso.utils.logging_config import get_logger  # noqa: E402

logger = get_logger("quartic_iso")

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        logger.info("Received termination signal, stopping")
        sys.exit(130)
    except Exception as e:
        logger.critical(f"Critical error: {e!s}")
        logger.critical(traceback.format_exc())
        sys.exit(1)
