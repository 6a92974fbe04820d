#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Logger Utility

This module provides logging functionality for the MVFlow package.
Diagnostics always go to the error stream; result data go to files.
"""

import os
import sys
import logging

# Default log format
DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

ROOT_LOGGER_NAME = 'mvflow'

# Values accepted by the MVFLOW_LOG environment variable
LOG_LEVELS = {
    'error': logging.ERROR,
    'info': logging.INFO,
    'debug': logging.DEBUG,
}

# Create loggers dictionary to store loggers by name
_loggers = {}


def level_from_env(default='info'):
    """
    Resolve the log level from the MVFLOW_LOG environment variable.

    Args:
        default (str, optional): Level name used when the variable is unset.

    Returns:
        int: Logging level
    """
    name = os.getenv('MVFLOW_LOG', default).strip().lower()
    if name not in LOG_LEVELS:
        logging.getLogger(ROOT_LOGGER_NAME).warning(
            f"Unknown MVFLOW_LOG value '{name}', using '{default}'")
        name = default
    return LOG_LEVELS[name]


def setup_logger(name=ROOT_LOGGER_NAME, level=logging.INFO, log_file=None, log_format=None):
    """
    Set up a logger with the given name, level, and format.

    Args:
        name (str, optional): Logger name. Defaults to 'mvflow'.
        level (int, optional): Logging level. Defaults to logging.INFO.
        log_file (str, optional): Path to log file. If None, logs to stderr only.
        log_format (str, optional): Log format string. Defaults to DEFAULT_LOG_FORMAT.

    Returns:
        logging.Logger: Configured logger
    """
    # If logger already exists, only refresh its level
    if name in _loggers and _loggers[name].handlers:
        _loggers[name].setLevel(level)
        return _loggers[name]

    logger = logging.getLogger(name)
    logger.setLevel(level)
    logger.propagate = False

    formatter = logging.Formatter(log_format or DEFAULT_LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        # Make sure directory exists
        log_dir = os.path.dirname(log_file)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir)

        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    _loggers[name] = logger

    return logger


def get_logger(name=None):
    """
    Get a logger by name. Module loggers are children of the package logger.

    Args:
        name (str, optional): Logger name, usually ``__name__``.

    Returns:
        logging.Logger: Logger instance
    """
    if name is None or name == ROOT_LOGGER_NAME:
        return _loggers.get(ROOT_LOGGER_NAME, logging.getLogger(ROOT_LOGGER_NAME))

    if name in _loggers:
        return _loggers[name]

    # Names under the package already nest below the package logger
    if name.startswith(ROOT_LOGGER_NAME + '.'):
        logger = logging.getLogger(name)
    else:
        logger = logging.getLogger(ROOT_LOGGER_NAME).getChild(name)
    _loggers[name] = logger
    return logger


def set_log_level(level):
    """
    Set the log level for all loggers.

    Args:
        level (int): Logging level (e.g., logging.INFO, logging.DEBUG)
    """
    for logger in _loggers.values():
        logger.setLevel(level)
        for handler in logger.handlers:
            handler.setLevel(level)
