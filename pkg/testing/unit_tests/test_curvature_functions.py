#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Curvature Function Unit Tests

This module tests the curvature-function registry, including:
- Normalization and homogeneity of every registry member
- Analytic gradients and Hessians against finite differences
- The speed Phi = F^beta and its chain rule
- Cone membership, spec parsing and registry contents
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

from mvflow.curvature.functions import (
    CurvatureSpec,
    LambdaVector,
    default_registry,
    eval_batch,
    eval_phi_batch,
    evaluate,
    evaluate_phi,
    parse_spec,
)
from mvflow.utils.error_handler import ConeViolationError, DomainError


class TestRegistry(unittest.TestCase):
    """Test cases for registry contents and spec parsing."""

    def test_registry_for_surfaces(self):
        """The n = 2 registry lists eight distinct functions."""
        names = [spec.name for spec in default_registry(2)]
        self.assertEqual(names, ['MeanH', 'NormOfA', 'GammaK(2)', 'QuotientEml(2,1)',
                                 'QuotientEml(2,0)', 'PowerMean(-1)', 'PowerMean(0)',
                                 'PowerMean(0.5)'])

    def test_registry_includes_gamma_three(self):
        """From n = 3 on the registry carries GammaK(3)."""
        names = [spec.name for spec in default_registry(5)]
        self.assertIn('GammaK(3)', names)
        self.assertIn('QuotientEml(5,4)', names)

    def test_declared_classes(self):
        """Convexity classes follow the admissible examples."""
        self.assertEqual(CurvatureSpec('NormOfA').declared_class, 'convex')
        self.assertEqual(CurvatureSpec('GammaK', k=2).declared_class, 'convex')
        self.assertEqual(CurvatureSpec('QuotientEml', m=2, l=0).declared_class, 'concave')
        self.assertEqual(CurvatureSpec('PowerMean', r=2.0).declared_class, 'convex')
        self.assertEqual(CurvatureSpec('PowerMean', r=-1.0).declared_class, 'concave')

    def test_parse_spec(self):
        """Spec names parse back to the same spec."""
        for spec in default_registry(3):
            self.assertEqual(parse_spec(spec.name), spec)
        self.assertEqual(CurvatureSpec.from_dict('GammaK(3)'), CurvatureSpec('GammaK', k=3))
        self.assertEqual(CurvatureSpec.from_dict({'family': 'QuotientEml',
                                                  'params': {'m': 2, 'l': 1}}).name,
                         'QuotientEml(2,1)')

    def test_invalid_specs(self):
        """Unknown families and out-of-range parameters are rejected."""
        with self.assertRaises(DomainError):
            CurvatureSpec('Unknown')
        with self.assertRaises(DomainError):
            CurvatureSpec('QuotientEml', m=1, l=2)
        with self.assertRaises(DomainError):
            CurvatureSpec('PowerMean', r=-2.0)
        with self.assertRaises(DomainError):
            CurvatureSpec('QuotientEml', m=3, l=0).validate(2)
        with self.assertRaises(DomainError):
            CurvatureSpec('GammaK', k=3).validate(2)
        CurvatureSpec('GammaK', k=3).validate(3)


class TestEvaluation(unittest.TestCase):
    """Test cases for values and derivatives."""

    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_normalized_at_umbilic_point(self):
        """Every registry member equals 1 at (1, ..., 1)."""
        for n in (2, 3, 5):
            for spec in default_registry(n):
                self.assertAlmostEqual(evaluate(spec, np.ones(n)).value, 1.0, places=14,
                                       msg=spec.name)

    def test_known_values(self):
        """Hand-computed values of several families."""
        self.assertAlmostEqual(evaluate(CurvatureSpec('MeanH'), [1.0, 2.0, 3.0]).value, 2.0)
        self.assertAlmostEqual(evaluate(CurvatureSpec('NormOfA'), [3.0, 4.0]).value,
                               5.0 / np.sqrt(2.0))
        self.assertAlmostEqual(evaluate(CurvatureSpec('PowerMean', r=-1.0), [1.0, 3.0]).value, 1.5)
        self.assertAlmostEqual(evaluate(CurvatureSpec('PowerMean', r=0.0), [1.0, 4.0]).value, 2.0)
        self.assertAlmostEqual(evaluate(CurvatureSpec('QuotientEml', m=2, l=0), [1.0, 4.0]).value,
                               2.0)

    def test_homogeneity_and_euler(self):
        """F is 1-homogeneous and satisfies sum lam_i f_i = F."""
        lam = 10.0 ** self.rng.uniform(-1.0, 1.0, size=(20, 3))
        for spec in default_registry(3):
            bundle = eval_batch(spec, lam, order=1)
            assert_allclose(eval_batch(spec, 2.5 * lam, order=0).value, 2.5 * bundle.value,
                            rtol=1e-12)
            self.assertLess(np.max(bundle.euler_residual(lam)), 1e-12, msg=spec.name)

    def test_derivatives_match_finite_differences(self):
        """Gradients and Hessians agree with central differences to 1e-6 relative."""
        for n in (2, 3, 5):
            lam_batch = 10.0 ** self.rng.uniform(-1.0, 1.0, size=(10, n))
            for spec in default_registry(n):
                for lam in lam_batch:
                    bundle = evaluate(spec, lam, order=2)
                    fd_grad = np.zeros(n)
                    fd_hess = np.zeros((n, n))
                    for i in range(n):
                        e = np.zeros(n)
                        e[i] = 1e-6 * lam[i]
                        plus, minus = evaluate(spec, lam + e, order=1), evaluate(spec, lam - e, order=1)
                        fd_grad[i] = (plus.value - minus.value) / (2.0 * e[i])
                        fd_hess[:, i] = (plus.gradient - minus.gradient) / (2.0 * e[i])
                    scale = np.max(np.abs(bundle.hessian)) + 1e-12
                    assert_allclose(bundle.gradient, fd_grad, rtol=1e-6, err_msg=spec.name)
                    assert_allclose(bundle.hessian, fd_hess, rtol=1e-6, atol=1e-6 * scale,
                                    err_msg=spec.name)

    def test_batch_matches_single(self):
        """Batched evaluation agrees with one-vector evaluation."""
        lam = 10.0 ** self.rng.uniform(-1.0, 1.0, size=(4, 3))
        spec = CurvatureSpec('GammaK', k=2)
        batch = eval_batch(spec, lam)
        for i in range(4):
            single = evaluate(spec, lam[i])
            self.assertAlmostEqual(batch.value[i], single.value, places=13)
            assert_allclose(batch.hessian[i], single.hessian, rtol=1e-13)

    def test_speed_chain_rule(self):
        """Phi = F^beta with gradient beta F^(beta-1) grad F."""
        spec = CurvatureSpec('NormOfA')
        lam = np.array([0.5, 1.5, 2.0])
        base = evaluate(spec, lam)
        phi = evaluate_phi(spec, 2.0, lam)
        self.assertAlmostEqual(phi.value, base.value ** 2)
        assert_allclose(phi.gradient, 2.0 * base.value * base.gradient)
        assert_allclose(phi.hessian, 2.0 * base.value * base.hessian
                        + 2.0 * np.outer(base.gradient, base.gradient))
        self.assertEqual(eval_phi_batch(spec, 1.5, lam).value.shape, (1,))

    def test_beta_below_one(self):
        """beta < 1 violates the flow hypothesis."""
        with self.assertRaises(DomainError):
            evaluate_phi(CurvatureSpec('MeanH'), 0.5, [1.0, 1.0])

    def test_cone_violation(self):
        """Vectors on or outside the positive cone are rejected."""
        with self.assertRaises(ConeViolationError):
            evaluate(CurvatureSpec('MeanH'), [1.0, 0.0, 2.0])
        with self.assertRaises(ConeViolationError) as ctx:
            evaluate(CurvatureSpec('MeanH'), [[1.0, 1.0], [1.0, -1.0]])
        self.assertEqual(ctx.exception.index, 1)
        with self.assertRaises(ConeViolationError):
            LambdaVector((1.0, np.nan))

    def test_lambda_vector_sorted(self):
        """LambdaVector stores its entries ascending."""
        vec = LambdaVector((3.0, 1.0, 2.0))
        self.assertEqual(vec.entries, (1.0, 2.0, 3.0))
        self.assertEqual(vec.n, 3)
        self.assertAlmostEqual(evaluate(CurvatureSpec('MeanH'), vec).value, 2.0)


if __name__ == '__main__':
    unittest.main()
