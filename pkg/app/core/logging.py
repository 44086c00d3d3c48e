"""
Logging setup shared by services and commands.
"""
import logging
import sys

from app.constants import DEFAULT_LOG_LEVEL

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_ROOT_NAME = "app"


def configure_logging(level: str = DEFAULT_LOG_LEVEL) -> logging.Logger:
    """
    Attach a single stderr handler to the package logger.

    Args:
        level: Logging level name (DEBUG, INFO, WARNING, ...)

    Returns:
        logging.Logger: The package root logger
    """
    root = logging.getLogger(_ROOT_NAME)
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        root.addHandler(handler)
    return root


def get_logger(name: str) -> logging.Logger:
    """Module logger below the package root."""
    return logging.getLogger(name)
