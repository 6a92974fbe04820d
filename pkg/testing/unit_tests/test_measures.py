#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Sphere Measure Unit Tests
"""

import unittest

import numpy as np
from numpy.testing import assert_allclose

# Add parent directory to path to allow importing from mvflow
import sys
import pathlib
parent_dir = str(pathlib.Path(__file__).parent.parent.parent)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from mvflow.geometry.measures import polar_weights, sphere_area, unit_ball_volume
from mvflow.utils.error_handler import DomainError


class TestMeasures(unittest.TestCase):
    """Test cases for ball volumes, sphere areas and polar weights."""

    def test_ball_volumes(self):
        assert_allclose(unit_ball_volume(1), 2.0)
        assert_allclose(unit_ball_volume(2), np.pi)
        assert_allclose(unit_ball_volume(3), 4.0 * np.pi / 3.0)
        assert_allclose(unit_ball_volume(4), np.pi ** 2 / 2.0)

    def test_sphere_areas(self):
        assert_allclose(sphere_area(1), 2.0 * np.pi)
        assert_allclose(sphere_area(2), 4.0 * np.pi)
        assert_allclose(sphere_area(3), 2.0 * np.pi ** 2)

    def test_weights_integrate_constants(self):
        """sum w = int_0^pi sin^(n-1)."""
        assert_allclose(np.sum(polar_weights(32, 2)), 2.0, rtol=1e-12)
        assert_allclose(np.sum(polar_weights(33, 3)), np.pi / 2.0, rtol=1e-12)
        assert_allclose(np.sum(polar_weights(64, 4)), 4.0 / 3.0, rtol=1e-12)

    def test_weights_integrate_cosines(self):
        """Cosine modes up to N are integrated exactly."""
        theta = np.linspace(0.0, np.pi, 33)
        w = polar_weights(32, 2)
        # int_0^pi cos(2t) sin(t) dt = -2/3
        assert_allclose(w @ np.cos(2.0 * theta), -2.0 / 3.0, rtol=1e-11)
        # int_0^pi cos(t) sin(t) dt = 0
        self.assertAlmostEqual(w @ np.cos(theta), 0.0, places=12)

    def test_weights_read_only(self):
        w = polar_weights(16, 2)
        self.assertFalse(w.flags.writeable)
        with self.assertRaises(ValueError):
            w[0] = 1.0

    def test_invalid_arguments(self):
        with self.assertRaises(DomainError):
            polar_weights(1, 2)
        with self.assertRaises(DomainError):
            polar_weights(16, 1)
        with self.assertRaises(DomainError):
            unit_ball_volume(0)


if __name__ == '__main__':
    unittest.main()
