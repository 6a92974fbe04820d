#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Symmetric Polynomials

This module evaluates elementary symmetric functions E_m and complete
homogeneous symmetric functions h_k of principal curvature vectors, together
with their first and second partial derivatives.

All functions accept a single vector of shape (n,) or a batch of shape
(..., n) and are evaluated by product-expansion recurrences, never by subset
enumeration.
"""

import numpy as np

from mvflow.utils.error_handler import DomainError


def _as_batch(lam):
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 0:
        raise DomainError("curvature vector must have at least one entry")
    return lam


def elementary_symmetric_all(lam):
    """
    Coefficients E_0..E_n of the polynomial prod_i (1 + lam_i t).

    Args:
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        numpy.ndarray: Shape (..., n + 1), entry m holds E_m
    """
    lam = _as_batch(lam)
    n = lam.shape[-1]
    e = np.zeros(lam.shape[:-1] + (n + 1,))
    e[..., 0] = 1.0
    for i in range(n):
        x = lam[..., i:i + 1]
        # descending update keeps the previous column intact
        e[..., 1:i + 2] = e[..., 1:i + 2] + x * e[..., 0:i + 1]
    return e


def elementary_symmetric(m, lam):
    """
    Evaluate the m-th elementary symmetric function.

    Args:
        m (int): Order, 0 <= m <= n
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        float or numpy.ndarray: E_m(lam)

    Raises:
        DomainError: If m is out of range
    """
    lam = _as_batch(lam)
    n = lam.shape[-1]
    if not 0 <= m <= n:
        raise DomainError(f"order m={m} outside 0..{n}")
    value = elementary_symmetric_all(lam)[..., m]
    return float(value) if np.ndim(value) == 0 else value


def _delete_one(lam):
    """Stack of complements: out[..., i, :] is lam with entry i removed."""
    n = lam.shape[-1]
    idx = np.array([[j for j in range(n) if j != i] for i in range(n)], dtype=int)
    return lam[..., idx]


def _delete_two(lam):
    """out[..., i, j, :] is lam with entries i and j removed (i != j)."""
    n = lam.shape[-1]
    idx = np.zeros((n, n, max(n - 2, 0)), dtype=int)
    for i in range(n):
        for j in range(n):
            if i != j:
                idx[i, j] = [k for k in range(n) if k != i and k != j]
    return lam[..., idx]


def elementary_symmetric_gradient(m, lam):
    """
    Partial derivatives dE_m/dlam_i = E_{m-1}(lam without entry i).

    Args:
        m (int): Order, 1 <= m <= n
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        numpy.ndarray: Shape (..., n)
    """
    lam = _as_batch(lam)
    n = lam.shape[-1]
    if not 1 <= m <= n:
        raise DomainError(f"gradient order m={m} outside 1..{n}")
    if n == 1:
        return np.ones_like(lam)
    return elementary_symmetric_all(_delete_one(lam))[..., m - 1]


def elementary_symmetric_hessian(m, lam):
    """
    Second derivatives E_{m-2}(lam without entries i, j), zero on the diagonal.

    Args:
        m (int): Order, 0 <= m <= n
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        numpy.ndarray: Shape (..., n, n)
    """
    lam = _as_batch(lam)
    n = lam.shape[-1]
    if not 0 <= m <= n:
        raise DomainError(f"order m={m} outside 0..{n}")
    hess = np.zeros(lam.shape + (n,))
    if m < 2:
        return hess
    if n == 2:
        hess[..., 0, 1] = hess[..., 1, 0] = 1.0
        return hess
    pairs = elementary_symmetric_all(_delete_two(lam))[..., m - 2]
    off = ~np.eye(n, dtype=bool)
    hess[..., off] = pairs[..., off]
    return hess


def complete_symmetric_all(lam, k_max):
    """
    Complete homogeneous symmetric functions h_0..h_{k_max}.

    Coefficients of prod_i 1 / (1 - lam_i t).

    Args:
        lam (array_like): Curvatures, shape (..., n)
        k_max (int): Highest degree

    Returns:
        numpy.ndarray: Shape (..., k_max + 1)
    """
    lam = _as_batch(lam)
    h = np.zeros(lam.shape[:-1] + (k_max + 1,))
    h[..., 0] = 1.0
    for i in range(lam.shape[-1]):
        x = lam[..., i]
        for k in range(1, k_max + 1):
            h[..., k] = h[..., k] + x * h[..., k - 1]
    return h


def complete_symmetric(k, lam):
    """
    Evaluate the complete homogeneous symmetric function of degree k.

    Args:
        k (int): Degree, k >= 0
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        float or numpy.ndarray: h_k(lam)
    """
    if k < 0:
        raise DomainError(f"degree k={k} must be non-negative")
    value = complete_symmetric_all(lam, k)[..., k]
    return float(value) if np.ndim(value) == 0 else value


def complete_symmetric_gradient(k, lam):
    """
    Partial derivatives dh_k/dlam_i = h_{k-1}(lam, lam_i).

    The argument is augmented by a repeated copy of entry i.

    Args:
        k (int): Degree, k >= 1
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        numpy.ndarray: Shape (..., n)
    """
    lam = _as_batch(lam)
    if k < 1:
        raise DomainError(f"gradient degree k={k} must be >= 1")
    n = lam.shape[-1]
    aug = np.concatenate(
        [np.broadcast_to(lam[..., None, :], lam.shape[:-1] + (n, n)), lam[..., :, None]],
        axis=-1)
    return complete_symmetric_all(aug, k - 1)[..., k - 1]


def complete_symmetric_hessian(k, lam):
    """
    Second derivatives (1 + delta_ij) h_{k-2}(lam, lam_i, lam_j).

    Args:
        k (int): Degree, k >= 0
        lam (array_like): Curvatures, shape (..., n)

    Returns:
        numpy.ndarray: Shape (..., n, n)
    """
    lam = _as_batch(lam)
    n = lam.shape[-1]
    hess = np.zeros(lam.shape + (n,))
    if k < 2:
        return hess
    base = np.broadcast_to(lam[..., None, None, :], lam.shape[:-1] + (n, n, n))
    li = np.broadcast_to(lam[..., :, None, None], lam.shape[:-1] + (n, n, 1))
    lj = np.broadcast_to(lam[..., None, :, None], lam.shape[:-1] + (n, n, 1))
    aug = np.concatenate([base, li, lj], axis=-1)
    hess = complete_symmetric_all(aug, k - 2)[..., k - 2]
    return hess * (1.0 + np.eye(n))
