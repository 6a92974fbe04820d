#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Mixed-Volume-Preserving Curvature Flow Laboratory

Numerical simulation and verification of mixed-volume-preserving curvature
flows of strictly convex hypersurfaces, parametrized by support functions.
"""

__version__ = '1.0.0'
