"""
Logging configuration for chain runs, estimators and diagnostics.

Provides structured logging on stderr so that CSV/JSON artifacts and any
command output on stdout stay clean.
"""

import logging
import os
import sys

import numpy as np
from dotenv import load_dotenv


def setup_logger(name: str = 'regenmc') -> logging.Logger:
    """
    Set up a logger with structured formatting for regenmc operations.

    The level is taken from REGENMC_LOG_LEVEL (after an optional .env file
    has been loaded), defaulting to INFO.

    Args:
        name: Logger name (default: regenmc)

    Returns:
        Configured logger instance
    """
    load_dotenv()
    level_name = os.getenv('REGENMC_LOG_LEVEL', 'INFO').upper()
    level = getattr(logging, level_name, logging.INFO)

    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Avoid adding handlers if they already exist
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(logging.DEBUG)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)

        logger.addHandler(handler)

    return logger


def set_log_level(level_name: str) -> None:
    """Change the level of the shared logger (used by the --log-level flag)."""
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level: {level_name}")
    logger.setLevel(level)


def format_matrix(matrix, precision: int = 4) -> str:
    """
    Render a small matrix on one line for log messages.

    Args:
        matrix: Array-like of shape (d, d) or (d,)
        precision: Number of significant digits

    Returns:
        Compact string such as "[[0.72]]"
    """
    return np.array2string(
        np.asarray(matrix, dtype=float),
        precision=precision,
        separator=', ',
        max_line_width=10_000
    ).replace('\n', '')


# Create default logger instance
logger = setup_logger()
