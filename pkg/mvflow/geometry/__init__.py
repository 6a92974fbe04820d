#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Geometry Package

This package provides support-function grids, quadrature, mixed volumes and
the closed-form initial bodies.
"""

from .support import AxisymProfile, SphereGrid2D, NodeCurvature, RadiusBounds
from .bodies import make_body

__all__ = ['AxisymProfile', 'SphereGrid2D', 'NodeCurvature', 'RadiusBounds', 'make_body']
