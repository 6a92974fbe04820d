#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Decay Fitting

Least-squares fits of exponential decay rates to trajectory tails.
"""

from dataclasses import dataclass, asdict

import numpy as np
from scipy.stats import linregress

from mvflow.utils.error_handler import FitUnavailableError

QUANTITIES = ('f_max', 'pinch_ratio - 1')

MIN_RECORDS = 20


@dataclass
class DecayFit:
    """
    Fitted log-linear decay q(t) ~ exp(intercept + rate t).

    Attributes:
        quantity (str): Fitted quantity
        rate (float): Slope of log q against t
        intercept (float): Intercept of the fit
        r_squared (float): Coefficient of determination
        window (tuple): (t_start, t_end) of the fitted records
        records (int): Number of fitted records
    """
    quantity: str
    rate: float
    intercept: float
    r_squared: float
    window: tuple
    records: int

    def to_dict(self):
        data = asdict(self)
        data['window'] = list(self.window)
        return data


def quantity_series(trajectory, quantity):
    """Times and values of a decay quantity along a trajectory."""
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown decay quantity '{quantity}'")
    t = np.array([r.t for r in trajectory], dtype=float)
    if quantity == 'f_max':
        q = np.array([r.f_max for r in trajectory], dtype=float)
    else:
        q = np.array([r.pinch_ratio for r in trajectory], dtype=float) - 1.0
    return t, q


def fit_exponential(t, q, tolerance=1e-8, quantity='f_max', min_records=MIN_RECORDS):
    """
    Fit log(q) against t over the last contiguous window with
    10 * tolerance <= q <= 1e-2 * q[0].

    Args:
        t (array_like): Times
        q (array_like): Positive decaying quantity
        tolerance (float, optional): Convergence tolerance of the run
        quantity (str, optional): Name stored in the fit
        min_records (int, optional): Smallest admissible window

    Returns:
        DecayFit: The fit

    Raises:
        FitUnavailableError: If no window of min_records records qualifies
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    if q.size == 0 or not q[0] > 0.0:
        raise FitUnavailableError(f"{quantity}: initial value is not positive")

    inside = (q > 0.0) & (q >= 10.0 * tolerance) & (q <= 1e-2 * q[0])
    if not np.any(inside):
        raise FitUnavailableError(f"{quantity}: no records inside the fit window")
    end = len(q) - int(np.argmax(inside[::-1]))
    start = end
    while start > 0 and inside[start - 1]:
        start -= 1
    if end - start < min_records:
        raise FitUnavailableError(
            f"{quantity}: {end - start} records in the fit window, {min_records} needed")

    tw, qw = t[start:end], q[start:end]
    if np.ptp(tw) == 0.0:
        raise FitUnavailableError(f"{quantity}: fit window has no time extent")
    fit = linregress(tw, np.log(qw))
    if not np.isfinite(fit.slope):
        raise FitUnavailableError(f"{quantity}: degenerate fit")
    return DecayFit(
        quantity=quantity,
        rate=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue ** 2),
        window=(float(tw[0]), float(tw[-1])),
        records=int(end - start),
    )


def fit_decay(trajectory, quantity='f_max', tolerance=1e-8):
    """
    Exponential decay rate of f_max or pinch_ratio - 1 along a trajectory.

    Args:
        trajectory (list): MonitorRecord sequence
        quantity (str, optional): 'f_max' or 'pinch_ratio - 1'
        tolerance (float, optional): Convergence tolerance of the run

    Returns:
        DecayFit: Negative rate for a decaying tail

    Raises:
        FitUnavailableError: If the tail is too short or flat
    """
    t, q = quantity_series(trajectory, quantity)
    return fit_exponential(t, q, tolerance=tolerance, quantity=quantity)
