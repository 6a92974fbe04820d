#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Sphere Measures

Volumes of unit balls, areas of unit spheres and the polar-angle quadrature
weights shared by the support-function grids.
"""

import numpy as np
from cachetools import cached, LRUCache
from scipy.special import gamma

from mvflow.utils.error_handler import DomainError


@cached(cache=LRUCache(maxsize=64))
def unit_ball_volume(d):
    """
    Volume omega_d of the unit ball in R^d.

    Args:
        d (int): Ambient dimension, d >= 1

    Returns:
        float: pi^(d/2) / Gamma(d/2 + 1)
    """
    if d < 1:
        raise DomainError(f"ball dimension d={d} must be positive")
    return float(np.pi ** (d / 2.0) / gamma(d / 2.0 + 1.0))


def sphere_area(n):
    """Area of the unit sphere S^n, equal to (n + 1) * omega_{n+1}."""
    return (n + 1) * unit_ball_volume(n + 1)


@cached(cache=LRUCache(maxsize=32))
def _polar_weights(N, n):
    theta = np.linspace(0.0, np.pi, N + 1)
    k = np.arange(N + 1)

    # Moments int_0^pi cos(k t) sin^(n-1)(t) dt by Gauss-Legendre in t
    x, gw = np.polynomial.legendre.leggauss(2 * N + 64)
    t = 0.5 * np.pi * (x + 1.0)
    gw = 0.5 * np.pi * gw
    moments = np.cos(np.outer(k, t)) @ (gw * np.sin(t) ** (n - 1))

    basis = np.cos(np.outer(k, theta))
    weights = np.linalg.solve(basis, moments)
    weights.setflags(write=False)
    return weights


def polar_weights(N, n):
    """
    Quadrature weights on the uniform grid theta_j = j pi / N for
    int_0^pi g(theta) sin^(n-1)(theta) dtheta.

    The weights integrate cos(k theta) exactly for k = 0..N, so constants
    and smooth even-periodic integrands converge spectrally.

    Args:
        N (int): Number of intervals
        n (int): Hypersurface dimension, n >= 2

    Returns:
        numpy.ndarray: Read-only array of N + 1 weights
    """
    if N < 2:
        raise DomainError(f"polar grid needs at least 2 intervals, got {N}")
    if n < 2:
        raise DomainError(f"dimension n={n} must be >= 2")
    return _polar_weights(int(N), int(n))
