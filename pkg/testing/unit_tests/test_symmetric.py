#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Symmetric Polynomial Unit Tests

This module tests the symmetric-function algebra, including:
- Elementary symmetric values against hand-computed cases
- Complete homogeneous values and augmented-argument derivatives
- Gradients and Hessians against central finite differences
- Batch evaluation and domain errors
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

from mvflow.curvature.symmetric import (
    complete_symmetric,
    complete_symmetric_all,
    complete_symmetric_gradient,
    complete_symmetric_hessian,
    elementary_symmetric,
    elementary_symmetric_all,
    elementary_symmetric_gradient,
    elementary_symmetric_hessian,
)
from mvflow.utils.error_handler import DomainError


def central_gradient(func, lam, step=1e-6):
    grad = np.zeros_like(lam)
    for i in range(lam.size):
        e = np.zeros_like(lam)
        e[i] = step * lam[i]
        grad[i] = (func(lam + e) - func(lam - e)) / (2.0 * e[i])
    return grad


class TestElementarySymmetric(unittest.TestCase):
    """Test cases for E_m and its derivatives."""

    def setUp(self):
        self.lam = np.array([1.0, 2.0, 3.0])
        self.rng = np.random.default_rng(11)

    def test_values(self):
        """E_0..E_3 of (1, 2, 3) are 1, 6, 11, 6."""
        assert_allclose(elementary_symmetric_all(self.lam), [1.0, 6.0, 11.0, 6.0])
        self.assertEqual(elementary_symmetric(2, self.lam), 11.0)

    def test_batch_shape(self):
        """Batches keep their leading axes."""
        lam = self.rng.uniform(0.5, 2.0, size=(4, 5, 3))
        self.assertEqual(elementary_symmetric_all(lam).shape, (4, 5, 4))
        self.assertEqual(elementary_symmetric(3, lam).shape, (4, 5))
        assert_allclose(elementary_symmetric(3, lam), np.prod(lam, axis=-1))

    def test_order_out_of_range(self):
        """Orders outside 0..n are rejected."""
        with self.assertRaises(DomainError):
            elementary_symmetric(4, self.lam)
        with self.assertRaises(DomainError):
            elementary_symmetric_gradient(0, self.lam)

    def test_gradient_matches_finite_differences(self):
        """dE_m/dlam_i agrees with central differences."""
        for n in (2, 3, 5):
            lam = 10.0 ** self.rng.uniform(-1.0, 1.0, size=n)
            for m in range(1, n + 1):
                fd = central_gradient(lambda x: elementary_symmetric(m, x), lam)
                assert_allclose(elementary_symmetric_gradient(m, lam), fd, rtol=1e-6, atol=1e-9)

    def test_hessian_matches_finite_differences(self):
        """Second derivatives agree with differences of the gradient."""
        lam = 10.0 ** self.rng.uniform(-1.0, 1.0, size=4)
        for m in range(2, 5):
            hess = elementary_symmetric_hessian(m, lam)
            for j in range(4):
                fd = central_gradient(lambda x: elementary_symmetric_gradient(m, x)[j], lam)
                assert_allclose(hess[j], fd, rtol=1e-6, atol=1e-8)

    def test_hessian_two_dimensions(self):
        """The Hessian of E_2 in two variables is the swap matrix."""
        assert_allclose(elementary_symmetric_hessian(2, np.array([3.0, 7.0])),
                        [[0.0, 1.0], [1.0, 0.0]])


class TestCompleteSymmetric(unittest.TestCase):
    """Test cases for the complete homogeneous functions h_k."""

    def setUp(self):
        self.lam = np.array([1.0, 2.0, 3.0])

    def test_values(self):
        """h_1 is the sum and h_2 of (1, 2, 3) is 25."""
        h = complete_symmetric_all(self.lam, 2)
        assert_allclose(h, [1.0, 6.0, 25.0])
        self.assertEqual(complete_symmetric(0, self.lam), 1.0)

    def test_gradient(self):
        """dh_2/dlam_i = H + lam_i."""
        assert_allclose(complete_symmetric_gradient(2, self.lam), [7.0, 8.0, 9.0])

    def test_hessian(self):
        """The Hessian of h_2 is 1 off the diagonal and 2 on it."""
        assert_allclose(complete_symmetric_hessian(2, self.lam),
                        [[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]])

    def test_derivatives_match_finite_differences(self):
        """Gradients and Hessians of h_3 and h_4 agree with central differences."""
        rng = np.random.default_rng(3)
        lam = 10.0 ** rng.uniform(-1.0, 1.0, size=3)
        for k in (3, 4):
            fd = central_gradient(lambda x: complete_symmetric(k, x), lam)
            assert_allclose(complete_symmetric_gradient(k, lam), fd, rtol=1e-6, atol=1e-9)
            hess = complete_symmetric_hessian(k, lam)
            for j in range(3):
                fd = central_gradient(lambda x: complete_symmetric_gradient(k, x)[j], lam)
                assert_allclose(hess[j], fd, rtol=1e-6, atol=1e-8)

    def test_negative_degree(self):
        """Negative degrees are rejected."""
        with self.assertRaises(DomainError):
            complete_symmetric(-1, self.lam)


if __name__ == '__main__':
    unittest.main()
