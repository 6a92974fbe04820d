#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Curvature Package

This package provides symmetric-function algebra on the positive cone and the
registry of admissible curvature functions.
"""

from .functions import (
    CurvatureSpec,
    DerivativeBundle,
    LambdaVector,
    default_registry,
    evaluate,
    evaluate_phi,
    parse_spec,
)

__all__ = ['CurvatureSpec', 'DerivativeBundle', 'LambdaVector', 'default_registry',
           'evaluate', 'evaluate_phi', 'parse_spec']
