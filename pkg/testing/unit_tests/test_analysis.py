#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Analysis Unit Tests

This module tests the post-processing of flow runs, including:
- Monitor records and pinching quantities
- The pointwise umbilicity inequality check
- Exponential decay fits
- The monotonicity audit, the limit-sphere check and the audit report
"""

import unittest
from types import SimpleNamespace

import numpy as np
from numpy.testing import assert_allclose

# Add parent directory to path to allow importing from mvflow
import sys
import pathlib
parent_dir = str(pathlib.Path(__file__).parent.parent.parent)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

from mvflow.analysis.audit import (
    StepMonotonicityTracker,
    audit_report,
    limit_sphere_check,
    monotonicity_audit,
)
from mvflow.analysis.decay import fit_decay, fit_exponential
from mvflow.analysis.monitor import (
    InequalityTracker,
    important_inequality_check,
    pinching_quantities,
    record,
)
from mvflow.data.models.flow_config import FlowConfig
from mvflow.data.models.monitor_record import MonitorRecord
from mvflow.flow.solver import build_initial_state, run
from mvflow.geometry.bodies import Spheroid
from mvflow.geometry.measures import unit_ball_volume
from mvflow.utils.error_handler import FitUnavailableError


def sphere_config(**changes):
    data = {
        'n': 2,
        'spec': 'MeanH',
        'initial': {'kind': 'sphere', 'params': {'radius': 1.5}},
        'backend': {'kind': 'axisym', 'resolution': 32},
    }
    data.update(changes)
    return FlowConfig.from_dict(data)


def make_records(count, **series):
    """Synthetic trajectory: t = 0.1 * step, fields overridden by the given series."""
    records = []
    for i in range(count):
        values = dict(step=i, t=0.1 * i, dt=0.1, preserved_volume=1.0, min_q1=0.2, min_q2=0.9,
                      f_max=0.01, pinch_ratio=1.1, speed_min=-0.1, speed_max=0.1, phi_max=1.0,
                      phi_bar=0.9, rho_minus=1.0, rho_plus=1.1, radius_ratio=1.1,
                      radius_bound=3.0, z_max=2.0)
        for name, data in series.items():
            values[name] = float(data[i])
        records.append(MonitorRecord(**values))
    return records


class TestMonitor(unittest.TestCase):
    """Test cases for monitor records."""

    def test_pinching_quantities(self):
        lam = np.array([[1.0, 1.0], [1.0, 3.0]])
        q1, q2, deficit = pinching_quantities(lam, np.array([1.0, 2.0]))
        assert_allclose(q1, [0.25, 3.0 / 16.0])
        assert_allclose(q2, [1.0, 0.75])
        assert_allclose(deficit, [0.0, 1.0 / 16.0])

    def test_sphere_record(self):
        """A sphere of radius R: no deficit, unit pinching, Z = Phi/(3R/4)."""
        state = build_initial_state(sphere_config())
        entry = record(state, sphere_config())
        self.assertEqual(entry.step, 0)
        self.assertEqual(entry.f_max, 0.0)
        self.assertAlmostEqual(entry.pinch_ratio, 1.0, places=12)
        self.assertAlmostEqual(entry.min_q1, 0.25, places=12)
        self.assertAlmostEqual(entry.min_q2, 1.0 / 1.5 ** 2 / (1.0 / 1.5) ** 2, places=12)
        self.assertAlmostEqual(entry.z_max, (1.0 / 1.5) / (0.75 * 1.5), places=10)
        self.assertAlmostEqual(entry.preserved_volume, unit_ball_volume(3) * 1.5 ** 3, places=10)
        self.assertEqual(len(entry.volumes), 4)

    def test_preserved_volume_follows_index(self):
        config = sphere_config(m_index=0)
        entry = record(build_initial_state(config), config)
        self.assertAlmostEqual(entry.preserved_volume, unit_ball_volume(3) * 1.5 ** 2, places=10)


class TestImportantInequality(unittest.TestCase):
    """Test cases for the pointwise umbilicity check."""

    def test_sphere_passes(self):
        grid = Spheroid(2, a=1.0, c=1.0).grid('axisym', 32)
        report = important_inequality_check(grid, 0.1, 1.0)
        self.assertTrue(report['passed'])
        self.assertEqual(report['nodes_checked'], 33)

    def test_surface_constant(self):
        """For n = 2 the left side is exactly 4 times the deficit."""
        grid = Spheroid(2, a=1.0, c=1.3).grid('axisym', 64)
        self.assertTrue(important_inequality_check(grid, 0.1, 3.9)['passed'])
        failed = important_inequality_check(grid, 0.1, 4.5)
        self.assertFalse(failed['passed'])
        self.assertGreater(failed['violations'], 0)
        self.assertLess(failed['min_margin'], 0.0)
        assert_allclose(failed['min_ratio'], 4.0, rtol=1e-6)


class TestInequalityTracker(unittest.TestCase):
    """Test cases for the along-run umbilicity check."""

    def setUp(self):
        self.config = sphere_config(initial={'kind': 'spheroid', 'params': {'a': 1.0, 'c': 1.3}},
                                    max_steps=40, cadence=10)

    def test_every_record_checked(self):
        """The tracker sees the state of every record, all nodes of the spheroid are pinched."""
        tracker = InequalityTracker(0.1, 3.9)
        result = run(self.config, on_record=tracker)
        self.assertEqual(tracker.records_checked, len(result.trajectory))
        self.assertEqual(tracker.nodes_checked, 33 * len(result.trajectory))
        self.assertTrue(tracker.passed)
        assert_allclose(tracker.min_ratio, 4.0, rtol=1e-6)
        report = audit_report(result, self.config, inequality=tracker)
        self.assertEqual(report['important_inequality']['records_checked'], len(result.trajectory))
        self.assertTrue(report['important_inequality']['passed'])

    def test_violation_located(self):
        """A constant above the surface value 4 fails, and the worst record is reported."""
        tracker = InequalityTracker(0.1, 4.5)
        result = run(self.config, on_record=tracker)
        steps = [entry.step for entry in result.trajectory]
        self.assertFalse(tracker.passed)
        self.assertGreater(tracker.violations, 0)
        self.assertLess(tracker.min_margin, 0.0)
        self.assertIn(tracker.worst_step, steps)
        report = audit_report(result, self.config, inequality=tracker)
        self.assertFalse(report['important_inequality']['passed'])
        self.assertFalse(report['passed'])


class TestStepMonotonicity(unittest.TestCase):
    """Test cases for the single-step pinching tracker."""

    def test_every_step_seen(self):
        config = sphere_config(spec='QuotientEml(2,0)',
                               initial={'kind': 'spheroid', 'params': {'a': 1.0, 'c': 1.3}},
                               backend={'kind': 'axisym', 'resolution': 64},
                               max_steps=40, cadence=20)
        steps = StepMonotonicityTracker(config.spec.declared_class)
        result = run(config, on_step=steps)
        self.assertEqual(result.reason, 'max_steps')
        self.assertEqual(steps.steps, 40)
        self.assertEqual(steps.quantity, 'min_q1')
        self.assertTrue(steps.monotone)
        report = audit_report(result, config, steps=steps)
        self.assertEqual(report['step_monotonicity']['steps'], 40)
        self.assertTrue(report['step_monotonicity']['monotone'])

    def test_drop_located(self):
        """K/H^2 falls from 1/4 to 2/9 between the first two states."""
        steps = StepMonotonicityTracker('concave')
        for index, lam in enumerate(([[1.0, 1.0]], [[1.0, 2.0]], [[1.0, 2.0]])):
            lam = np.array(lam)
            steps(SimpleNamespace(curvature=SimpleNamespace(lam=lam), f=np.mean(lam, axis=1),
                                  step=index))
        self.assertEqual(steps.steps, 2)
        self.assertEqual(steps.worst_step, 1)
        assert_allclose(steps.worst_relative_decrease, (2.0 / 9.0 - 0.25) / 0.25)
        self.assertFalse(steps.monotone)


class TestDecay(unittest.TestCase):
    """Test cases for exponential fits."""

    def test_exact_exponential(self):
        t = np.linspace(0.0, 10.0, 101)
        fit = fit_exponential(t, np.exp(-2.0 * t))
        assert_allclose(fit.rate, -2.0, rtol=1e-10)
        assert_allclose(fit.r_squared, 1.0, rtol=1e-12)
        self.assertGreaterEqual(fit.records, 20)
        # window starts once q has dropped by 1e-2
        self.assertGreaterEqual(fit.window[0], np.log(100.0) / 2.0)
        self.assertEqual(set(fit.to_dict()), {'quantity', 'rate', 'intercept', 'r_squared',
                                              'window', 'records'})

    def test_short_window(self):
        t = np.linspace(0.0, 3.0, 10)
        with self.assertRaises(FitUnavailableError):
            fit_exponential(t, np.exp(-2.0 * t))

    def test_flat_or_zero_series(self):
        with self.assertRaises(FitUnavailableError):
            fit_exponential(np.arange(30.0), np.ones(30))
        with self.assertRaises(FitUnavailableError):
            fit_exponential(np.arange(30.0), np.zeros(30))

    def test_trajectory_quantities(self):
        t = 0.1 * np.arange(200)
        records = make_records(200, f_max=np.exp(-t), pinch_ratio=1.0 + np.exp(-0.5 * t))
        assert_allclose(fit_decay(records, 'f_max').rate, -1.0, rtol=1e-8)
        assert_allclose(fit_decay(records, 'pinch_ratio - 1').rate, -0.5, rtol=1e-6)
        with self.assertRaises(ValueError):
            fit_decay(records, 'speed_max')


class TestAudit(unittest.TestCase):
    """Test cases for the monotonicity audit and the audit report."""

    def test_monotone_trajectory(self):
        records = make_records(10, min_q1=np.linspace(0.2, 0.25, 10),
                               pinch_ratio=np.linspace(1.2, 1.0, 10))
        report = monotonicity_audit(records, 'concave', resolution=256)
        self.assertTrue(report['monotone'])
        self.assertTrue(report['passed'])
        self.assertTrue(report['pinch_tail_nonincreasing'])
        self.assertEqual(report['quantity'], 'min_q1')

    def test_decrease_detected(self):
        q = np.linspace(0.5, 0.9, 10)
        q[6] = 0.6
        report = monotonicity_audit(make_records(10, min_q2=q), 'convex', resolution=32)
        self.assertEqual(report['quantity'], 'min_q2')
        self.assertFalse(report['monotone'])
        self.assertEqual(report['worst_record'], 6)
        self.assertTrue(report['resolution_flag'])
        self.assertFalse(report['passed'])

    def test_radius_bound_violation(self):
        report = monotonicity_audit(make_records(5, radius_ratio=[1.1, 1.1, 4.0, 1.1, 1.1]))
        self.assertFalse(report['radius_bound_holds'])
        self.assertFalse(report['passed'])
        self.assertFalse(report['resolution_flag'])

    def test_empty_trajectory(self):
        with self.assertRaises(ValueError):
            monotonicity_audit([])

    def test_limit_sphere(self):
        config = sphere_config()
        state = build_initial_state(config)
        report = limit_sphere_check(state, config)
        self.assertAlmostEqual(report['r_star'], 1.5, places=12)
        self.assertTrue(report['passed'])
        with self.assertRaises(ValueError):
            limit_sphere_check(state, sphere_config(m_index=0))
        other = limit_sphere_check(state, sphere_config(m_index=0),
                                   initial_volume=unit_ball_volume(3) * 1.5 ** 2)
        self.assertLess(other['max_deviation'], 1e-12)

    def test_sphere_run_report(self):
        """A sphere run passes its audit; no decay tail is available."""
        config = sphere_config()
        result = run(config)
        report = audit_report(result, config, delta_emp=1.0)
        self.assertTrue(report['passed'])
        self.assertTrue(report['limit_sphere']['passed'])
        self.assertTrue(report['important_inequality']['passed'])
        self.assertFalse(report['decay']['f_max']['available'])
        self.assertEqual(report['termination_reason'], 'converged')


if __name__ == '__main__':
    unittest.main()
