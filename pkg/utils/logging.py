"""Logging configuration for the toolkit"""

import os
import logging
from datetime import datetime
from typing import Optional

from config.settings import LOGGER_NAME, LOG_DIR, LOG_LEVEL


def setup_logging(log_dir: Optional[str] = None, level: Optional[str] = None):
    """Setup file logging for a command run"""
    log_dir = log_dir or os.getenv("AD_SURVIVAL_LOG_DIR", LOG_DIR)
    level = (level or os.getenv("AD_SURVIVAL_LOG_LEVEL", LOG_LEVEL)).upper()

    # Create logs directory if it doesn't exist
    os.makedirs(log_dir, exist_ok=True)

    # Create timestamp for log file
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    log_file = os.path.join(log_dir, f"ad_survival_{timestamp}.log")

    # File only; commands print their own summaries to stdout
    handler = logging.FileHandler(log_file)
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, level, logging.INFO))
    for old in list(logger.handlers):
        logger.removeHandler(old)
        old.close()
    logger.addHandler(handler)
    logger.propagate = False

    logger.info(f"Logging enabled - Log file: {log_file}")
    return logger


def get_logger(name: Optional[str] = None):
    """Get the project logger, or a child of it"""
    if not name or name == LOGGER_NAME:
        return logging.getLogger(LOGGER_NAME)
    return logging.getLogger(f"{LOGGER_NAME}.{name}")
