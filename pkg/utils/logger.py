"""
Application Logger
Sets up logging configuration for console and file output
"""

import logging
import sys

from config import LOG_DIR


def setup_logger():
    """Configure and return the logger instance."""

    logger = logging.getLogger("wittcheck")
    logger.setLevel(logging.INFO)

    # Check if handlers already exist to prevent duplicate logs
    if logger.hasHandlers():
        return logger

    # Formatter
    formatter = logging.Formatter(
        '%(asctime)s - %(levelname)s - %(name)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # File Handler
    file_handler = logging.FileHandler(LOG_DIR / "wittcheck.log", encoding='utf-8')
    file_handler.setFormatter(formatter)
    file_handler.setLevel(logging.INFO)
    logger.addHandler(file_handler)

    # Console Handler (stderr keeps machine reports on stdout clean)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.setLevel(logging.WARNING)
    logger.addHandler(console_handler)

    logger.propagate = False
    return logger


def set_verbose(verbose: bool):
    """Raise or lower the console handler threshold."""
    level = logging.INFO if verbose else logging.WARNING
    for handler in logger.handlers:
        if not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)


logger = setup_logger()
