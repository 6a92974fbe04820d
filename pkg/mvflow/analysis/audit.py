#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Run Audit

Post-processing of completed runs: pinching monotonicity, speed and radius
bounds, the limit-sphere identity and the audit report bundle.
"""

import numpy as np

from mvflow.analysis.decay import fit_decay
from mvflow.analysis.monitor import InequalityTracker, pinching_quantities
from mvflow.flow.solver import initial_body
from mvflow.geometry.measures import unit_ball_volume
from mvflow.geometry.support import recentred_support
from mvflow.utils.error_handler import FitUnavailableError
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Allowed single-step decrease of min Q, relative to min Q
MONOTONICITY_TOLERANCE = 1e-6

# Grids coarser than this are flagged when an audit fails
COARSE_RESOLUTION = 64


def monotonicity_audit(trajectory, declared_class='concave', resolution=None,
                       tolerance=MONOTONICITY_TOLERANCE):
    """
    Audit pinching monotonicity and the monitored bounds along a trajectory.

    min Q1 is audited for concave F and min Q2 for convex F.

    Args:
        trajectory (list): MonitorRecord sequence, nonempty
        declared_class (str, optional): 'convex' or 'concave'
        resolution (int, optional): Polar resolution of the run, used to flag coarse grids
        tolerance (float, optional): Allowed relative decrease per record

    Returns:
        dict: Checks with pass/fail and measured values
    """
    if not trajectory:
        raise ValueError("trajectory must not be empty")
    key = 'min_q2' if declared_class == 'convex' else 'min_q1'
    q = np.array([getattr(r, key) for r in trajectory])
    drops = np.diff(q)
    if drops.size:
        worst = int(np.argmin(drops / q[:-1]))
        worst_drop = float(drops[worst])
        worst_relative = float(drops[worst] / q[worst])
    else:
        worst, worst_drop, worst_relative = 0, 0.0, 0.0
    monotone = worst_relative >= -tolerance

    phi_max = np.array([r.phi_max for r in trajectory])
    z_max = np.array([r.z_max for r in trajectory])
    ratios = np.array([r.radius_ratio for r in trajectory])
    bounds = np.array([r.radius_bound for r in trajectory])
    pinch = np.array([r.pinch_ratio for r in trajectory])
    tail = pinch[len(pinch) // 2:]
    tail_rises = np.diff(tail) > 1e-9 * tail[:-1]

    report = {
        'quantity': key,
        'worst_decrease': worst_drop,
        'worst_relative_decrease': worst_relative,
        'worst_record': int(trajectory[worst + 1].step) if drops.size else 0,
        'monotone': bool(monotone),
        'sup_phi_max': float(np.max(phi_max)),
        'phi_bounded': bool(np.all(np.isfinite(phi_max))),
        'z_finite': bool(np.all(np.isfinite(z_max))),
        'sup_z_max': float(np.max(z_max)),
        'radius_bound_holds': bool(np.all(ratios <= bounds)),
        'worst_radius_margin': float(np.min(bounds - ratios)),
        'pinch_tail_nonincreasing': bool(not np.any(tail_rises)),
    }
    report['passed'] = bool(report['monotone'] and report['phi_bounded'] and report['z_finite']
                            and report['radius_bound_holds'])
    report['resolution_flag'] = bool(not report['passed'] and resolution is not None
                                     and _polar_resolution(resolution) < COARSE_RESOLUTION)
    if not report['passed']:
        cause = "coarse grid" if report['resolution_flag'] else "unknown"
        logger.warning(f"Monotonicity audit failed on {key}: worst relative decrease "
                       f"{worst_relative:.3e} (suspected cause: {cause})")
    return report


class StepMonotonicityTracker:
    """
    Largest single-step relative decrease of min Q1 (concave F) or min Q2 (convex F).

    An instance is a valid on_step hook for run(); records only see every
    cadence-th state, this sees all of them.
    """

    def __init__(self, declared_class='concave', tolerance=MONOTONICITY_TOLERANCE):
        self.quantity = 'min_q2' if declared_class == 'convex' else 'min_q1'
        self.tolerance = tolerance
        self.steps = 0
        self.previous = None
        self.worst_relative_decrease = 0.0
        self.worst_step = None

    def __call__(self, state):
        q1, q2, _ = pinching_quantities(state.curvature.lam, state.f)
        current = float(np.min(q2 if self.quantity == 'min_q2' else q1))
        if self.previous is not None:
            relative = (current - self.previous) / self.previous
            if relative < self.worst_relative_decrease:
                self.worst_relative_decrease = relative
                self.worst_step = state.step
            self.steps += 1
        self.previous = current

    @property
    def monotone(self):
        return self.worst_relative_decrease >= -self.tolerance

    def to_dict(self):
        return {
            'quantity': self.quantity,
            'steps': self.steps,
            'worst_relative_decrease': self.worst_relative_decrease,
            'worst_step': self.worst_step,
            'monotone': bool(self.monotone),
        }


def _polar_resolution(resolution):
    return resolution[0] if isinstance(resolution, (list, tuple)) else int(resolution)


def limit_sphere_check(final_state, config, initial_volume=None, tolerance=1e-3):
    """
    Compare the final body with the sphere enclosing the initial preserved volume.

    R* = (V_{n-m}(0) / omega_{n+1})^(1/(n-m)).

    Args:
        final_state: Final flow state
        config (FlowConfig): Run configuration
        initial_volume (float, optional): V_{n-m}(0); the closed-form volume of the
            initial body is used for m = -1 when omitted
        tolerance (float, optional): Pass threshold on the relative support deviation

    Returns:
        dict: R*, max |h - R*|/R* after Steiner recentring, final pinch_ratio - 1
    """
    n, m = config.n, config.m_index
    if initial_volume is None:
        body = initial_body(config)
        initial_volume = body.volume() if m == -1 else None
        if initial_volume is None:
            raise ValueError("initial_volume is required without a closed-form oracle")
    r_star = (initial_volume / unit_ball_volume(n + 1)) ** (1.0 / (n - m))
    support = recentred_support(final_state)
    deviation = float(np.max(np.abs(support - r_star)) / r_star)
    lam = final_state.grid.curvatures().lam
    pinch_excess = float(np.max(lam[:, -1] / lam[:, 0]) - 1.0)
    return {
        'initial_volume': float(initial_volume),
        'r_star': float(r_star),
        'max_deviation': deviation,
        'pinch_excess': pinch_excess,
        'tolerance': tolerance,
        'passed': deviation <= tolerance,
    }


def _fit_entry(trajectory, quantity, tolerance):
    try:
        fit = fit_decay(trajectory, quantity, tolerance=tolerance)
    except FitUnavailableError as exc:
        return {'available': False, 'reason': str(exc)}
    return dict(fit.to_dict(), available=True)


def audit_report(result, config, delta_emp=None, epsilon=0.1, inequality=None, steps=None):
    """
    Bundle the audit of a completed run.

    The pointwise umbilicity check reports the worst values over every
    record when an InequalityTracker observed the run; given only delta_emp
    it covers the initial and final states.

    Args:
        result (FlowResult): Completed run
        config (FlowConfig): Run configuration
        delta_emp (float, optional): Sampled delta for the pointwise umbilicity check
        epsilon (float, optional): Pinching level of delta_emp
        inequality (InequalityTracker, optional): Tracker passed to run() as on_record
        steps (StepMonotonicityTracker, optional): Tracker passed to run() as on_step

    Returns:
        dict: Audit JSON content with pass/fail per check and measured constants
    """
    trajectory = result.trajectory
    report = {
        'termination_reason': result.reason,
        'conservation_drift': result.conservation_drift,
        'monotonicity': monotonicity_audit(trajectory, config.spec.declared_class,
                                           config.resolution),
        'decay': {
            'f_max': _fit_entry(trajectory, 'f_max', config.f_tolerance),
            'pinch_ratio - 1': _fit_entry(trajectory, 'pinch_ratio - 1', config.f_tolerance),
        },
        'min_f_integral': trajectory[-1].min_f_integral,
    }
    if result.converged:
        report['limit_sphere'] = limit_sphere_check(
            result.final_state, config, initial_volume=trajectory[0].preserved_volume)
    if inequality is None and delta_emp is not None:
        inequality = InequalityTracker(epsilon, delta_emp)
        inequality.observe(result.initial_state, trajectory[0].step)
        inequality.observe(result.final_state, trajectory[-1].step)
    if inequality is not None:
        report['important_inequality'] = inequality.to_dict()
        if not inequality.passed:
            logger.warning(f"Umbilicity inequality violated at {inequality.violations} nodes, "
                           f"worst margin {inequality.min_margin:.3e} at step {inequality.worst_step}")
    if steps is not None:
        report['step_monotonicity'] = steps.to_dict()
    checks = [report['monotonicity']['passed']]
    if 'step_monotonicity' in report:
        checks.append(report['step_monotonicity']['monotone'])
    if 'limit_sphere' in report:
        checks.append(report['limit_sphere']['passed'])
    if 'important_inequality' in report:
        checks.append(report['important_inequality']['passed'])
    report['passed'] = bool(all(checks))
    return report
