import logging
import sys
import os
from datetime import datetime

_configured = set()


def setup_logger(name=None, level=None):
    """
    Set up a logger with the specified name and level.

    Console output goes to stderr so that stdout only carries results.
    A per-day log file is added when DIVKIT_LOG_DIR is set.

    Args:
        name (str, optional): The logger name
        level (int, optional): The logging level, defaults to DIVKIT_LOG_LEVEL

    Returns:
        logging.Logger: The configured logger
    """
    if level is None:
        level_name = os.getenv("DIVKIT_LOG_LEVEL", "WARNING").upper()
        level = getattr(logging, level_name, logging.WARNING)

    # Get logger
    logger_name = name if name else "divkit"
    logger = logging.getLogger(logger_name)

    # Only configure if it hasn't been configured yet
    if not logger.handlers:
        logger.setLevel(level)
        logger.propagate = False
        _configured.add(logger_name)

        # Create formatters
        console_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        file_formatter = logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s')

        # Create console handler
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(console_formatter)
        logger.addHandler(console_handler)

        # Create file handler only when a log directory is configured
        log_dir = os.getenv("DIVKIT_LOG_DIR")
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            log_filename = os.path.join(log_dir, f"{logger_name}_{datetime.now().strftime('%Y%m%d')}.log")
            file_handler = logging.FileHandler(log_filename)
            file_handler.setLevel(level)
            file_handler.setFormatter(file_formatter)
            logger.addHandler(file_handler)

    return logger


def set_log_level(level):
    """
    Change the level of every logger created by setup_logger.

    Args:
        level (str | int): Level name such as "DEBUG", or a logging constant
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.WARNING)
    for logger_name in _configured:
        logger = logging.getLogger(logger_name)
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
