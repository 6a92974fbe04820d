#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Curvature Functions

This module provides the registry of admissible curvature functions f on the
positive cone, their normalized values, gradients and Hessians, and the
speed Phi = f^beta used by the flow.

Every family is homogeneous of degree one and normalized so that
f(1, ..., 1) = 1.
"""

from dataclasses import dataclass
from math import comb

import numpy as np
from cachetools import cached, LRUCache

from mvflow.curvature.symmetric import (
    elementary_symmetric_all,
    elementary_symmetric_gradient,
    elementary_symmetric_hessian,
    complete_symmetric,
    complete_symmetric_gradient,
    complete_symmetric_hessian,
)
from mvflow.utils.error_handler import ConeViolationError, DomainError

FAMILIES = ('MeanH', 'NormOfA', 'GammaK', 'QuotientEml', 'PowerMean')

# lam_i must exceed this fraction of max(lam)
CONE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LambdaVector:
    """
    A point of the positive cone, stored sorted ascending.

    Attributes:
        entries (tuple): Principal curvatures lam_1 <= ... <= lam_n
    """
    entries: tuple

    def __post_init__(self):
        values = np.sort(np.asarray(self.entries, dtype=float).ravel())
        check_cone(values)
        object.__setattr__(self, 'entries', tuple(float(v) for v in values))

    @property
    def n(self):
        return len(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __len__(self):
        return len(self.entries)


@dataclass
class DerivativeBundle:
    """
    Value, gradient and Hessian of a curvature function.

    Batched evaluations carry leading axes: value (...), gradient (..., n),
    hessian (..., n, n).
    """
    value: object
    gradient: np.ndarray
    hessian: np.ndarray = None

    def euler_residual(self, lam, degree=1.0):
        """Relative residual of sum_i lam_i f_i = degree * f."""
        lam = np.asarray(lam, dtype=float)
        lhs = np.sum(lam * self.gradient, axis=-1)
        rhs = degree * np.asarray(self.value)
        return np.abs(lhs - rhs) / np.maximum(np.abs(rhs), np.finfo(float).tiny)


def check_cone(lam):
    """
    Verify that every curvature vector lies strictly inside the positive cone.

    Args:
        lam (array_like): Shape (..., n)

    Raises:
        ConeViolationError: On the first vector that is not finite or has an
            entry at or below CONE_TOLERANCE * max entry
    """
    lam = np.asarray(lam, dtype=float)
    flat = lam.reshape(-1, lam.shape[-1]) if lam.ndim > 0 else lam.reshape(1, 1)
    top = np.max(flat, axis=-1)
    bad = ~np.all(np.isfinite(flat), axis=-1) | (top <= 0.0) | \
        np.any(flat <= CONE_TOLERANCE * top[:, None], axis=-1)
    if np.any(bad):
        index = int(np.argmax(bad))
        raise ConeViolationError(
            f"curvature vector {flat[index].tolist()} is not inside the positive cone",
            index=index)


@dataclass(frozen=True)
class CurvatureSpec:
    """
    A named member of the admissible curvature-function registry.

    Attributes:
        family (str): One of FAMILIES
        k (int): Degree for GammaK
        m (int): Numerator order for QuotientEml
        l (int): Denominator order for QuotientEml
        r (float): Exponent for PowerMean
    """
    family: str
    k: int = None
    m: int = None
    l: int = None
    r: float = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown curvature family '{self.family}'")
        if self.family == 'GammaK' and (self.k is None or int(self.k) < 1):
            raise DomainError("GammaK requires an integer k >= 1")
        if self.family == 'QuotientEml':
            if self.m is None or self.l is None or not int(self.m) > int(self.l) >= 0:
                raise DomainError("QuotientEml requires m > l >= 0")
        if self.family == 'PowerMean':
            if self.r is None:
                raise DomainError("PowerMean requires an exponent r")
            if float(self.r) < -1.0:
                raise DomainError(f"PowerMean exponent r={self.r} below -1 is not admissible")

    @property
    def name(self):
        if self.family == 'GammaK':
            return f"GammaK({self.k})"
        if self.family == 'QuotientEml':
            return f"QuotientEml({self.m},{self.l})"
        if self.family == 'PowerMean':
            return f"PowerMean({float(self.r):g})"
        return self.family

    @property
    def declared_class(self):
        """'convex' or 'concave', following the list of admissible examples."""
        if self.family in ('MeanH', 'NormOfA', 'GammaK'):
            return 'convex'
        if self.family == 'PowerMean' and float(self.r) > 1.0:
            return 'convex'
        return 'concave'

    def validate(self, n):
        """
        Check the spec against the hypersurface dimension.

        Raises:
            DomainError: If the parameters do not fit dimension n
        """
        if n < 1:
            raise DomainError(f"dimension n={n} must be positive")
        if self.family == 'QuotientEml' and int(self.m) > n:
            raise DomainError(f"QuotientEml requires n >= m, got n={n}, m={self.m}")
        if self.family == 'GammaK' and int(self.k) > n:
            raise DomainError(f"GammaK requires k <= n, got n={n}, k={self.k}")

    def normalization(self, n):
        """Value of the unscaled family at (1, ..., 1)."""
        return _normalization(self, n)

    def to_dict(self):
        params = {}
        for key in ('k', 'm', 'l', 'r'):
            value = getattr(self, key)
            if value is not None:
                params[key] = value
        return {'family': self.family, 'params': params}

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, str):
            return parse_spec(data)
        params = dict(data.get('params') or {})
        unknown = set(params) - {'k', 'm', 'l', 'r'}
        if unknown:
            raise DomainError(f"unknown curvature parameters {sorted(unknown)}")
        kwargs = {key: int(params[key]) for key in ('k', 'm', 'l') if key in params}
        if 'r' in params:
            kwargs['r'] = float(params['r'])
        return cls(family=data.get('family'), **kwargs)

    def __str__(self):
        return self.name


def parse_spec(text):
    """
    Parse names such as 'MeanH', 'GammaK(3)', 'QuotientEml(2,0)' or 'PowerMean(-1)'.

    Args:
        text (str): Spec name

    Returns:
        CurvatureSpec: The parsed spec
    """
    text = text.strip()
    if '(' not in text:
        return CurvatureSpec(text)
    family, _, rest = text.partition('(')
    args = [a.strip() for a in rest.rstrip(')').split(',') if a.strip()]
    if family == 'GammaK' and len(args) == 1:
        return CurvatureSpec('GammaK', k=int(args[0]))
    if family == 'QuotientEml' and len(args) == 2:
        return CurvatureSpec('QuotientEml', m=int(args[0]), l=int(args[1]))
    if family == 'PowerMean' and len(args) == 1:
        return CurvatureSpec('PowerMean', r=float(args[0]))
    raise DomainError(f"cannot parse curvature spec '{text}'")


def default_registry(n):
    """
    The admissible registry for dimension n.

    Args:
        n (int): Hypersurface dimension, n >= 2

    Returns:
        list: CurvatureSpec instances
    """
    specs = [CurvatureSpec('MeanH'), CurvatureSpec('NormOfA')]
    specs += [CurvatureSpec('GammaK', k=k) for k in range(2, min(n, 3) + 1)]
    pairs = [(n, n - 1), (n, 0), (2, 1), (2, 0)]
    seen = set()
    for m, l in pairs:
        if (m, l) not in seen and m > l >= 0:
            seen.add((m, l))
            specs.append(CurvatureSpec('QuotientEml', m=m, l=l))
    specs += [CurvatureSpec('PowerMean', r=r) for r in (-1.0, 0.0, 0.5)]
    return specs


def _raw_family(spec, lam, order):
    """Unnormalized value, gradient and Hessian of the family at lam."""
    n = lam.shape[-1]
    grad = hess = None

    if spec.family == 'MeanH':
        value = np.sum(lam, axis=-1)
        if order >= 1:
            grad = np.ones_like(lam)
        if order >= 2:
            hess = np.zeros(lam.shape + (n,))

    elif spec.family == 'NormOfA':
        value = np.sqrt(np.sum(lam * lam, axis=-1))
        if order >= 1:
            unit = lam / value[..., None]
            grad = unit
        if order >= 2:
            hess = (np.eye(n) - unit[..., :, None] * unit[..., None, :]) / value[..., None, None]

    elif spec.family == 'GammaK':
        k = int(spec.k)
        q = np.asarray(complete_symmetric(k, lam))
        value = q ** (1.0 / k)
        if order >= 1:
            dq = complete_symmetric_gradient(k, lam)
            scale = value / (k * q)
            grad = scale[..., None] * dq
        if order >= 2:
            d2q = complete_symmetric_hessian(k, lam)
            outer = dq[..., :, None] * dq[..., None, :]
            hess = scale[..., None, None] * (d2q + (1.0 / k - 1.0) * outer / q[..., None, None])

    elif spec.family == 'QuotientEml':
        m, l = int(spec.m), int(spec.l)
        e = elementary_symmetric_all(lam)
        em, el = e[..., m], e[..., l]
        value = np.exp((np.log(em) - np.log(el)) / (m - l))
        if order >= 1:
            gm = elementary_symmetric_gradient(m, lam) / em[..., None]
            gl = elementary_symmetric_gradient(l, lam) / el[..., None] if l >= 1 \
                else np.zeros_like(lam)
            dlog = (gm - gl) / (m - l)
            grad = value[..., None] * dlog
        if order >= 2:
            hm = elementary_symmetric_hessian(m, lam) / em[..., None, None] \
                - gm[..., :, None] * gm[..., None, :]
            hl = elementary_symmetric_hessian(l, lam) / el[..., None, None] \
                - gl[..., :, None] * gl[..., None, :]
            d2log = (hm - hl) / (m - l)
            hess = value[..., None, None] * (dlog[..., :, None] * dlog[..., None, :] + d2log)

    else:  # PowerMean
        r = float(spec.r)
        if r == 0.0:
            value = np.exp(np.mean(np.log(lam), axis=-1))
            w = 1.0 / (n * lam)
        else:
            powers = lam ** r
            total = np.sum(powers, axis=-1)
            value = total ** (1.0 / r)
            w = lam ** (r - 1.0) / total[..., None]
        if order >= 1:
            grad = value[..., None] * w
        if order >= 2:
            outer = w[..., :, None] * w[..., None, :]
            diag = np.zeros(lam.shape + (n,))
            idx = np.arange(n)
            diag[..., idx, idx] = w / lam
            hess = ((1.0 - r) * value)[..., None, None] * (outer - diag)

    return value, grad, hess


@cached(cache=LRUCache(maxsize=256))
def _normalization(spec, n):
    value, _, _ = _raw_family(spec, np.ones((1, n)), order=0)
    return float(value[0])


def evaluate(spec, lam, order=2, check=True):
    """
    Evaluate the normalized curvature function and its derivatives.

    Args:
        spec (CurvatureSpec): Registry member
        lam (array_like or LambdaVector): Curvatures, shape (n,) or (..., n)
        order (int, optional): 0 for value only, 1 adds the gradient,
            2 adds the Hessian
        check (bool, optional): Verify the cone and the dimension; callers
            whose curvatures come from floor-checked radii pass False

    Returns:
        DerivativeBundle: Value, gradient and Hessian

    Raises:
        ConeViolationError: If lam is not strictly inside the positive cone
    """
    lam = np.asarray(lam, dtype=float)
    single = lam.ndim == 1
    batch = lam[None, :] if single else lam
    n = batch.shape[-1]
    if check:
        check_cone(batch)
        spec.validate(n)

    norm = _normalization(spec, n)
    value, grad, hess = _raw_family(spec, batch, order)
    value = value / norm
    if grad is not None:
        grad = grad / norm
    if hess is not None:
        hess = hess / norm

    if single:
        value = float(value[0])
        grad = grad[0] if grad is not None else None
        hess = hess[0] if hess is not None else None
    return DerivativeBundle(value=value, gradient=grad, hessian=hess)


def evaluate_phi(spec, beta, lam, order=2, check=True):
    """
    Evaluate the speed Phi = f^beta with chain-rule derivatives.

    Args:
        spec (CurvatureSpec): Registry member
        beta (float): Exponent, beta >= 1
        lam (array_like or LambdaVector): Curvatures, shape (n,) or (..., n)
        order (int, optional): Derivative order as in evaluate()
        check (bool, optional): Passed on to evaluate()

    Returns:
        DerivativeBundle: Phi and its derivatives

    Raises:
        DomainError: If beta < 1
    """
    if not beta >= 1.0:
        raise DomainError(f"beta={beta} violates the hypothesis beta >= 1")
    base = evaluate(spec, lam, order=order, check=check)
    if beta == 1.0:
        return base

    f = np.asarray(base.value, dtype=float)
    value = f ** beta
    grad = hess = None
    if base.gradient is not None:
        slope = beta * f ** (beta - 1.0)
        grad = np.expand_dims(slope, -1) * base.gradient
    if base.hessian is not None:
        curve = beta * (beta - 1.0) * f ** (beta - 2.0)
        outer = base.gradient[..., :, None] * base.gradient[..., None, :]
        hess = np.expand_dims(slope, (-1, -2)) * base.hessian \
            + np.expand_dims(curve, (-1, -2)) * outer
    if np.ndim(value) == 0:
        value = float(value)
    return DerivativeBundle(value=value, gradient=grad, hessian=hess)


def binomial(n, m):
    """Binomial coefficient as float, zero outside 0 <= m <= n."""
    return float(comb(n, m)) if 0 <= m <= n else 0.0


def eval_batch(spec, lam, order=2):
    """evaluate() on an array of curvature vectors; always returns batched arrays."""
    return evaluate(spec, np.atleast_2d(np.asarray(lam, dtype=float)), order=order)


def eval_phi_batch(spec, beta, lam, order=2):
    """evaluate_phi() on an array of curvature vectors; always returns batched arrays."""
    return evaluate_phi(spec, beta, np.atleast_2d(np.asarray(lam, dtype=float)), order=order)
