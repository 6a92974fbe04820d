#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Utility Unit Tests

This module tests the error types, exit codes, console reporting and the
logging helpers.
"""

import io
import os
import sys
import logging
import unittest
from unittest.mock import patch

# Add parent directory to path to allow importing from mvflow
import pathlib
parent_dir = str(pathlib.Path(__file__).parent.parent.parent)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from mvflow.utils.error_handler import (
    EXIT_CODES,
    ConeViolationError,
    ConfigError,
    ConvexityLossError,
    DomainError,
    MVFlowError,
    exit_code_for,
    report_error,
    report_warning,
    setup_exception_handler,
)
from mvflow.utils.logger import get_logger, level_from_env, set_log_level


class TestErrors(unittest.TestCase):
    """Test cases for the exception types and exit codes."""

    def test_exit_codes(self):
        self.assertEqual(EXIT_CODES, {'converged': 0, 'config_error': 1, 'convexity_loss': 2,
                                      'max_steps': 3, 't_end': 4})
        self.assertEqual(exit_code_for('unknown'), 1)

    def test_hierarchy(self):
        self.assertTrue(issubclass(DomainError, ValueError))
        self.assertTrue(issubclass(ConfigError, ValueError))
        self.assertTrue(issubclass(ConeViolationError, DomainError))
        self.assertTrue(issubclass(ConvexityLossError, MVFlowError))
        self.assertFalse(issubclass(ConvexityLossError, ValueError))

    def test_messages(self):
        self.assertEqual(str(ConfigError("must be >= 2", field='n')), "n: must be >= 2")
        self.assertEqual(str(ConfigError("bad document")), "bad document")
        error = ConvexityLossError(12, -2.5e-3, 1e-10)
        self.assertEqual((error.node, error.value), (12, -2.5e-3))
        self.assertIn('node 12', str(error))


class TestReporting(unittest.TestCase):
    """Test cases for console reporting."""

    def test_report_error(self):
        with patch('sys.stderr', new_callable=io.StringIO) as stderr:
            report_error("Configuration Error", "Invalid configuration", "beta: too small")
        self.assertEqual(stderr.getvalue(), "[Configuration Error] Invalid configuration\n"
                                            "  beta: too small\n")

    def test_report_warning(self):
        with patch('sys.stderr', new_callable=io.StringIO) as stderr:
            report_warning("Audit", "checks failed")
        self.assertEqual(stderr.getvalue(), "[Audit] checks failed\n")

    def test_exception_handler(self):
        previous = sys.excepthook
        try:
            setup_exception_handler(debug_mode=True)
            self.assertIsNot(sys.excepthook, previous)
            with patch('sys.stderr', new_callable=io.StringIO) as stderr:
                try:
                    raise RuntimeError("boom")
                except RuntimeError:
                    sys.excepthook(*sys.exc_info())
            self.assertIn('RuntimeError', stderr.getvalue())
            self.assertIn('Traceback', stderr.getvalue())
        finally:
            sys.excepthook = previous


class TestLogger(unittest.TestCase):
    """Test cases for the logging helpers."""

    def test_level_from_env(self):
        with patch.dict(os.environ, {'MVFLOW_LOG': 'debug'}):
            self.assertEqual(level_from_env(), logging.DEBUG)
        with patch.dict(os.environ, {'MVFLOW_LOG': 'ERROR'}):
            self.assertEqual(level_from_env(), logging.ERROR)
        with patch.dict(os.environ, {'MVFLOW_LOG': 'verbose'}):
            self.assertEqual(level_from_env(), logging.INFO)

    def test_set_log_level(self):
        logger = get_logger('mvflow.analysis.audit')
        with patch.dict('mvflow.utils.logger._loggers', {'mvflow.analysis.audit': logger}, clear=True):
            previous = logger.level
            try:
                set_log_level(logging.ERROR)
                self.assertEqual(logger.level, logging.ERROR)
            finally:
                logger.setLevel(previous)

    def test_module_loggers_nest(self):
        self.assertEqual(get_logger('mvflow.flow.solver').name, 'mvflow.flow.solver')
        self.assertEqual(get_logger('sweep').name, 'mvflow.sweep')
        self.assertEqual(get_logger().name, 'mvflow')


if __name__ == '__main__':
    unittest.main()
