#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Error Handler

This module provides the exception types raised by the MVFlow package, the
mapping from run outcomes to process exit codes, and console error reporting.
"""

import sys
import traceback

from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Process exit codes, the only process-level contract of the CLI
EXIT_CODES = {
    'converged': 0,
    'config_error': 1,
    'convexity_loss': 2,
    'max_steps': 3,
    't_end': 4,
}


class MVFlowError(Exception):
    """Base class for all MVFlow errors."""


class DomainError(MVFlowError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConeViolationError(DomainError):
    """
    A curvature vector lies on or outside the positive cone.

    Attributes:
        index (int): Position of the offending sample, if known
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConvexityLossError(MVFlowError):
    """
    A principal radius dropped below the positivity floor.

    Attributes:
        node (int): Flat node index of the offending radius
        value (float): The offending radius
    """

    def __init__(self, node, value, floor=None):
        message = f"Convexity lost at node {node}: radius {value:.6e}"
        if floor is not None:
            message += f" below floor {floor:.3e}"
        super().__init__(message)
        self.node = int(node)
        self.value = float(value)


class ConfigError(MVFlowError, ValueError):
    """
    A run configuration is invalid.

    Attributes:
        field (str): Name of the offending configuration field, if known
    """

    def __init__(self, message, field=None):
        if field:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class FitUnavailableError(MVFlowError):
    """A decay fit cannot be computed from the trajectory."""


def exit_code_for(reason):
    """
    Map a termination reason to a process exit code.

    Args:
        reason (str): Termination reason or 'config_error'

    Returns:
        int: Exit code
    """
    return EXIT_CODES.get(reason, 1)


def setup_exception_handler(debug_mode=False):
    """
    Set up global exception handler to catch unhandled exceptions.

    Args:
        debug_mode (bool): Whether to print the full traceback
    """
    def exception_handler(exc_type, exc_value, exc_traceback):
        logger.critical("Unhandled exception",
                        exc_info=(exc_type, exc_value, exc_traceback))

        detailed_text = None
        if debug_mode:
            tb_lines = traceback.format_exception(exc_type, exc_value, exc_traceback)
            detailed_text = ''.join(tb_lines)

        report_error(
            title="Unhandled Exception",
            message=f"An unexpected error occurred: {exc_type.__name__}",
            details=str(exc_value),
            detailed_text=detailed_text
        )

    sys.excepthook = exception_handler
    logger.debug("Global exception handler installed")


def report_error(title="Error", message="An error occurred", details=None, detailed_text=None):
    """
    Print an error block to the error stream and log it.

    Args:
        title (str): Block title
        message (str): Main error message
        details (str): Additional details about the error
        detailed_text (str): Detailed technical information (e.g., traceback)
    """
    lines = [f"[{title}] {message}"]
    if details:
        lines.append(f"  {details}")
    if detailed_text:
        lines.append(detailed_text.rstrip())
    print('\n'.join(lines), file=sys.stderr)

    logger.error(f"{title}: {message}" + (f" - {details}" if details else ""))


def report_warning(title="Warning", message="Warning", details=None):
    """
    Print a warning block to the error stream and log it.

    Args:
        title (str): Block title
        message (str): Main warning message
        details (str): Additional details about the warning
    """
    text = f"[{title}] {message}"
    if details:
        text += f"\n  {details}"
    print(text, file=sys.stderr)

    logger.warning(f"{title}: {message}")
