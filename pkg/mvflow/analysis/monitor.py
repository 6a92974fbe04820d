#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Run Monitor

Computes the per-record scalars tracked along a flow: mixed volumes,
pinching quantities, the umbilicity deficit, speed extrema, radius bounds and
the Tso quantity.
"""

import numpy as np

from mvflow.curvature.certification import umbilicity_ratio
from mvflow.data.models.monitor_record import MonitorRecord
from mvflow.geometry.support import mixed_volumes, radii_bounds, recentred_support

# Absolute slack of the pointwise check; both sides are normalized by H^2
UMBILIC_SLACK = 1e-13


def pinching_quantities(lam, f):
    """
    Per-node Q1 = K/H^n, Q2 = K/F^n and deficit 1/n^n - K/H^n.

    Args:
        lam (numpy.ndarray): Curvatures, shape (nodes, n)
        f (numpy.ndarray): F per node

    Returns:
        tuple: (q1, q2, deficit) arrays
    """
    n = lam.shape[1]
    H = np.sum(lam, axis=1)
    K = np.prod(lam, axis=1)
    q1 = K / H ** n
    q2 = K / f ** n
    return q1, q2, n ** (-float(n)) - q1


def record(state, config, dt=0.0, min_f_integral=0.0):
    """
    Build the monitor record of a flow state.

    Z uses eps = rho_-/4 about the Steiner point of the current state.

    Args:
        state (FlowState): State with cached curvature data
        config (FlowConfig): Run configuration
        dt (float, optional): Step that produced the state
        min_f_integral (float, optional): Running integral of min F dt

    Returns:
        MonitorRecord: The record
    """
    n = state.n
    lam = state.curvature.lam
    q1, q2, deficit = pinching_quantities(lam, state.f)
    speed = state.speed

    bounds = radii_bounds(state.grid)
    support = recentred_support(state.grid)
    eps = bounds.rho_minus / 4.0
    z = state.phi / (support - eps)

    volumes = mixed_volumes(state.grid)
    preserved = volumes[n - config.m_index]

    return MonitorRecord(
        step=state.step,
        t=state.t,
        dt=float(dt),
        preserved_volume=preserved,
        min_q1=float(np.min(q1)),
        min_q2=float(np.min(q2)),
        f_max=max(float(np.max(deficit)), 0.0),
        pinch_ratio=bounds.pinch_ratio,
        speed_min=float(np.min(speed)),
        speed_max=float(np.max(speed)),
        phi_max=float(np.max(state.phi)),
        phi_bar=state.phi_bar,
        rho_minus=bounds.rho_minus,
        rho_plus=bounds.rho_plus,
        radius_ratio=bounds.ratio,
        radius_bound=bounds.bound,
        z_max=float(np.max(z)),
        min_f_integral=float(min_f_integral),
        volumes=volumes,
    )


def important_inequality_check(state, epsilon, delta_emp):
    """
    Pointwise check of (n|A|^2 - H^2)/H^2 >= delta (1/n^n - K/H^n) at the
    nodes whose curvatures satisfy lam_i >= eps H.

    Args:
        state: Flow state or grid
        epsilon (float): Pinching level
        delta_emp (float): Sampled infimum for (epsilon, n)

    Returns:
        dict: Nodes checked, violations, the smallest margin lhs - rhs and
            the smallest ratio lhs / deficit over non-umbilic nodes
    """
    grid = getattr(state, 'grid', state)
    lam = grid.curvatures().lam
    n = lam.shape[1]
    H = np.sum(lam, axis=1)
    pinched = np.all(lam >= epsilon * H[:, None], axis=1)
    lam, H = lam[pinched], H[pinched]
    lhs = (n * np.sum(lam * lam, axis=1) - H * H) / (H * H)
    rhs = delta_emp * (n ** (-float(n)) - np.prod(lam / H[:, None], axis=1))
    # both sides vanish at umbilic nodes
    slack = 1e-9 * (np.abs(lhs) + np.abs(rhs)) + UMBILIC_SLACK
    violations = int(np.sum(lhs < rhs - slack))
    min_ratio = None
    if lhs.size:
        ratio, degenerate = umbilicity_ratio(lam)
        if not np.all(degenerate):
            min_ratio = float(np.nanmin(ratio))
    return {
        'epsilon': float(epsilon),
        'delta': float(delta_emp),
        'nodes_checked': int(np.sum(pinched)),
        'violations': violations,
        'min_margin': float(np.min(lhs - rhs)) if lhs.size else None,
        'min_ratio': min_ratio,
        'passed': violations == 0,
    }


class InequalityTracker:
    """
    Runs important_inequality_check on the state of every monitor record.

    An instance is a valid on_record hook for run(); the worst values over
    the run are kept, not the per-record reports.
    """

    def __init__(self, epsilon, delta_emp):
        self.epsilon = float(epsilon)
        self.delta_emp = float(delta_emp)
        self.records_checked = 0
        self.nodes_checked = 0
        self.violations = 0
        self.min_margin = None
        self.min_ratio = None
        self.worst_step = None

    def __call__(self, entry, state):
        self.observe(state, entry.step)

    def observe(self, state, step):
        """Check one state and fold the result into the running worst values."""
        check = important_inequality_check(state, self.epsilon, self.delta_emp)
        self.records_checked += 1
        self.nodes_checked += check['nodes_checked']
        self.violations += check['violations']
        margin = check['min_margin']
        if margin is not None and (self.min_margin is None or margin < self.min_margin):
            self.min_margin = margin
            self.worst_step = int(step)
        ratio = check['min_ratio']
        if ratio is not None and (self.min_ratio is None or ratio < self.min_ratio):
            self.min_ratio = ratio
        return check

    @property
    def passed(self):
        return self.violations == 0

    def to_dict(self):
        return {
            'epsilon': self.epsilon,
            'delta': self.delta_emp,
            'records_checked': self.records_checked,
            'nodes_checked': self.nodes_checked,
            'violations': self.violations,
            'min_margin': self.min_margin,
            'min_ratio': self.min_ratio,
            'worst_step': self.worst_step,
            'passed': self.passed,
        }
