#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Curvature Function Certification

This module samples the positive cone to collect numerical evidence for the
structural conditions imposed on curvature functions (monotonicity,
convexity or concavity, inverse concavity) and for the algebraic
inequalities the flow analysis relies on. Violations are report content,
never exceptions.
"""

from dataclasses import dataclass, field, asdict

import numpy as np

from mvflow.curvature.functions import evaluate, default_registry, binomial
from mvflow.curvature.symmetric import elementary_symmetric_all
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Log-uniform sampling box for the cone
SAMPLE_LOW, SAMPLE_HIGH = 1e-3, 1e3

# Relative tolerance on Hessian eigenvalues
HESSIAN_TOLERANCE = 1e-8

# Relative tolerance on scalar inequalities
INEQUALITY_TOLERANCE = 1e-10

# Pairs closer than this fraction of |lam| skip divided differences
DIVIDED_DIFFERENCE_GAP = 1e-8


def sample_cone(n, samples, seed, low=SAMPLE_LOW, high=SAMPLE_HIGH):
    """
    Draw log-uniform samples of the positive cone, sorted ascending.

    Args:
        n (int): Dimension
        samples (int): Number of samples
        seed (int): Seed of the numpy generator
        low (float, optional): Lower bound of every entry
        high (float, optional): Upper bound of every entry

    Returns:
        numpy.ndarray: Shape (samples, n)
    """
    rng = np.random.default_rng(seed)
    lam = 10.0 ** rng.uniform(np.log10(low), np.log10(high), size=(samples, n))
    return np.sort(lam, axis=-1)


@dataclass
class CertificationReport:
    """Sampled evidence for the structural conditions of one curvature function."""
    spec: str
    declared_class: str
    n: int
    samples: int
    seed: int
    min_gradient: float
    monotone: bool
    min_eigenvalue: float
    max_eigenvalue: float
    convex_certified: bool
    concave_certified: bool
    inverse_concave: bool
    inverse_concave_standard: bool
    divided_differences_ok: bool
    skipped_pairs: int
    worst_violation: dict = None

    @property
    def consistent(self):
        """Whether the declared class and monotonicity are supported by the samples."""
        if not self.monotone:
            return False
        if self.declared_class == 'convex':
            return self.convex_certified
        return self.concave_certified

    def to_dict(self):
        data = asdict(self)
        data['consistent'] = self.consistent
        return data


def _sample_record(lam, kind, value):
    return {'lambda': [float(x) for x in lam], 'kind': kind, 'value': float(value)}


def certify_conditions(spec, samples, seed, n=3):
    """
    Collect sampled evidence that a curvature function meets its structural conditions.

    Args:
        spec (CurvatureSpec): Registry member
        samples (int): Number of cone samples, >= 1
        seed (int): Seed of the numpy generator
        n (int, optional): Dimension of the sampled cone

    Returns:
        CertificationReport: Report with the worst violating sample, if any
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    lam = sample_cone(n, samples, seed)
    bundle = evaluate(spec, lam, order=2)
    grad, hess = bundle.gradient, bundle.hessian
    f = np.asarray(bundle.value)

    norms = np.linalg.norm(hess, axis=(-2, -1))
    tol = HESSIAN_TOLERANCE * norms
    eig = np.linalg.eigvalsh(hess)
    eig_min, eig_max = eig[:, 0], eig[:, -1]
    scale = np.where(norms > 0.0, norms, 1.0)

    convex_ok = eig_min >= -tol
    concave_ok = eig_max <= tol

    # -f(1/x) concave, evaluated at x = 1/lam, so f derivatives sit at lam.
    lam2 = lam * lam
    g_grad = -grad * lam2
    g_hess = hess * lam2[:, :, None] * lam2[:, None, :]
    diag_term = 2.0 * grad * lam2 * lam
    # Tolerances follow the size of the summed terms; the sums cancel
    # almost exactly for the quotients E_n/E_{n-1} and the harmonic mean.
    term_size = np.linalg.norm(g_hess, axis=(-2, -1)) + np.linalg.norm(diag_term, axis=-1)
    idx = np.arange(n)
    g_hess[:, idx, idx] += diag_term
    tilde_hess = -g_hess
    tilde_eig = np.linalg.eigvalsh(tilde_hess)[:, -1]
    tilde_tol = HESSIAN_TOLERANCE * term_size
    inverse_ok = tilde_eig <= tilde_tol

    # Standard form: 1 / f(1/x) concave
    g = f
    outer = 2.0 * g_grad[:, :, None] * g_grad[:, None, :] / (g ** 3)[:, None, None]
    std_hess = -g_hess / (g ** 2)[:, None, None] + outer
    std_eig = np.linalg.eigvalsh(std_hess)[:, -1]
    std_tol = HESSIAN_TOLERANCE * (term_size / g ** 2 + np.linalg.norm(outer, axis=(-2, -1)))
    inverse_std_ok = std_eig <= std_tol

    # (f_k - f_l) / (lam_k - lam_l): <= 0 for concave, >= 0 for convex
    gap = lam[:, :, None] - lam[:, None, :]
    size = np.linalg.norm(lam, axis=-1)[:, None, None]
    usable = np.abs(gap) >= DIVIDED_DIFFERENCE_GAP * size
    usable &= ~np.eye(n, dtype=bool)[None, :, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        dd = np.where(usable, (grad[:, :, None] - grad[:, None, :]) / gap, 0.0)
    dd_tol = HESSIAN_TOLERANCE * scale[:, None, None]
    if spec.declared_class == 'convex':
        dd_ok = np.all(dd >= -dd_tol, axis=(-2, -1))
    else:
        dd_ok = np.all(dd <= dd_tol, axis=(-2, -1))
    skipped = int(np.sum(~usable) - samples * n)

    min_grad = float(np.min(grad))
    worst = None
    if min_grad <= 0.0:
        i = int(np.argmin(np.min(grad, axis=-1)))
        worst = _sample_record(lam[i], 'monotonicity', grad[i].min())
    elif spec.declared_class == 'convex' and not np.all(convex_ok):
        i = int(np.argmin(eig_min / scale))
        worst = _sample_record(lam[i], 'convexity', eig_min[i] / scale[i])
    elif spec.declared_class == 'concave' and not np.all(concave_ok):
        i = int(np.argmax(eig_max / scale))
        worst = _sample_record(lam[i], 'concavity', eig_max[i] / scale[i])
    elif not np.all(dd_ok):
        i = int(np.argmin(dd_ok))
        worst = _sample_record(lam[i], 'divided_difference', np.max(np.abs(dd[i])))

    report = CertificationReport(
        spec=spec.name,
        declared_class=spec.declared_class,
        n=n,
        samples=samples,
        seed=seed,
        min_gradient=min_grad,
        monotone=bool(min_grad > 0.0),
        min_eigenvalue=float(np.min(eig_min / scale)),
        max_eigenvalue=float(np.max(eig_max / scale)),
        convex_certified=bool(np.all(convex_ok)),
        concave_certified=bool(np.all(concave_ok)),
        inverse_concave=bool(np.all(inverse_ok)),
        inverse_concave_standard=bool(np.all(inverse_std_ok)),
        divided_differences_ok=bool(np.all(dd_ok)),
        skipped_pairs=skipped,
        worst_violation=worst,
    )
    if not report.consistent:
        logger.warning(f"Certification of {spec.name} (n={n}) found violations: {worst}")
    else:
        logger.debug(f"Certified {spec.name} as {spec.declared_class} on {samples} samples")
    return report


@dataclass
class InequalityRow:
    """Violation counts of the class-matched inequalities for one curvature function."""
    spec: str
    declared_class: str
    f_vs_mean: int = 0
    trace_vs_one: int = 0
    fh_second: int = 0
    worst: dict = None

    @property
    def violations(self):
        return self.f_vs_mean + self.trace_vs_one + self.fh_second


@dataclass
class DeltaEstimate:
    """Brute-force infimum of the umbilicity inequality ratio for one epsilon."""
    epsilon: float
    delta: float = None
    samples_used: int = 0
    skipped: int = 0
    infeasible: bool = False


@dataclass
class LemmaReport:
    """Results of the inequality sampler for one dimension."""
    n: int
    samples: int
    seed: int
    rows: list = field(default_factory=list)
    maclaurin_violations: int = 0
    deltas: list = field(default_factory=list)

    @property
    def total_violations(self):
        return sum(row.violations for row in self.rows) + self.maclaurin_violations

    def delta_for(self, epsilon):
        for estimate in self.deltas:
            if np.isclose(estimate.epsilon, epsilon):
                return estimate.delta
        return None

    def to_dict(self):
        return {
            'n': self.n,
            'samples': self.samples,
            'seed': self.seed,
            'rows': [dict(asdict(row), violations=row.violations) for row in self.rows],
            'maclaurin_violations': self.maclaurin_violations,
            'deltas': [asdict(d) for d in self.deltas],
            'total_violations': self.total_violations,
        }


def umbilicity_ratio(lam, degenerate_tol=1e-10):
    """
    Ratio [(n|A|^2 - H^2) / H^2] / [1/n^n - K/H^n] per sample.

    Args:
        lam (numpy.ndarray): Shape (samples, n)
        degenerate_tol (float, optional): Samples whose deficit falls below
            this fraction of 1/n^n are treated as umbilic

    Returns:
        tuple: (ratio with NaN at degenerate samples, boolean mask of degenerate samples)
    """
    n = lam.shape[-1]
    H = np.sum(lam, axis=-1)
    A2 = np.sum(lam * lam, axis=-1)
    K = np.prod(lam / H[:, None], axis=-1)
    deficit = n ** (-float(n)) - K
    spread = (n * A2 - H * H) / (H * H)
    degenerate = deficit <= degenerate_tol * n ** (-float(n))
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(degenerate, np.nan, spread / deficit)
    return ratio, degenerate


def _pinched_samples(n, epsilon, samples, rng):
    """Samples with lam_i >= epsilon * H and H = 1."""
    half = samples // 2
    w = np.concatenate([
        rng.dirichlet(np.ones(n), size=half),
        rng.dirichlet(np.full(n, 0.2), size=samples - half),
    ])
    lam = epsilon + (1.0 - n * epsilon) * w
    return np.sort(lam, axis=-1)


def sample_lemma_inequalities(n, samples, seed, epsilons=(0.1, 0.2), registry=None):
    """
    Sample the cone and test the class-matched curvature inequalities.

    Checks, per registry member, F <= H/n and sum f_i >= 1 for concave F
    (reversed for convex F) and H sum f_i lam_i^2 - F |A|^2 <= 0 (>= 0); the
    Maclaurin chain (E_m / C(n,m))^(1/m) <= H/n; and measures the empirical
    delta of the umbilicity inequality inside {lam_i >= eps H}.

    Args:
        n (int): Dimension, n >= 2
        samples (int): Number of samples
        seed (int): Seed of the numpy generator
        epsilons (tuple, optional): Pinching levels for the delta estimate
        registry (list, optional): Specs to test, default_registry(n) if None

    Returns:
        LemmaReport: Violation counts and delta estimates
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    registry = registry if registry is not None else default_registry(n)
    lam = sample_cone(n, samples, seed)
    H = np.sum(lam, axis=-1)
    mean = H / n
    A2 = np.sum(lam * lam, axis=-1)

    report = LemmaReport(n=n, samples=samples, seed=seed)
    for spec in registry:
        bundle = evaluate(spec, lam, order=1)
        F = np.asarray(bundle.value)
        trace = np.sum(bundle.gradient, axis=-1)
        fh2 = H * np.sum(bundle.gradient * lam * lam, axis=-1) - F * A2
        fh2_scale = INEQUALITY_TOLERANCE * F * A2

        row = InequalityRow(spec=spec.name, declared_class=spec.declared_class)
        if spec.declared_class == 'concave':
            bad_f = F > mean * (1.0 + INEQUALITY_TOLERANCE)
            bad_t = trace < 1.0 - INEQUALITY_TOLERANCE
            bad_h = fh2 > fh2_scale
        else:
            bad_f = F < mean * (1.0 - INEQUALITY_TOLERANCE)
            bad_t = trace > 1.0 + INEQUALITY_TOLERANCE
            bad_h = fh2 < -fh2_scale
        row.f_vs_mean = int(np.sum(bad_f))
        row.trace_vs_one = int(np.sum(bad_t))
        row.fh_second = int(np.sum(bad_h))
        bad = bad_f | bad_t | bad_h
        if np.any(bad):
            i = int(np.argmax(bad))
            row.worst = _sample_record(lam[i], 'inequality', F[i] / mean[i])
            logger.warning(f"{spec.name}: {row.violations} inequality violations at n={n}")
        report.rows.append(row)

    e = elementary_symmetric_all(lam)
    for m in range(1, n + 1):
        root = (e[:, m] / binomial(n, m)) ** (1.0 / m)
        report.maclaurin_violations += int(np.sum(root > mean * (1.0 + INEQUALITY_TOLERANCE)))

    rng = np.random.default_rng(seed + 1)
    for epsilon in epsilons:
        estimate = DeltaEstimate(epsilon=float(epsilon))
        if epsilon * n >= 1.0:
            # only the umbilic point satisfies lam_i >= eps H
            estimate.infeasible = True
            report.deltas.append(estimate)
            continue
        pinched = _pinched_samples(n, epsilon, samples, rng)
        ratio, degenerate = umbilicity_ratio(pinched)
        estimate.skipped = int(np.sum(degenerate))
        estimate.samples_used = int(pinched.shape[0] - estimate.skipped)
        if estimate.samples_used:
            estimate.delta = float(np.nanmin(ratio))
        report.deltas.append(estimate)
        logger.debug(f"n={n} eps={epsilon}: empirical delta {estimate.delta}")

    return report


@dataclass
class PinchingThreshold:
    """Sampled supremum of the pinching quantity outside the eps-pinched cone."""
    spec: str
    declared_class: str
    n: int
    epsilon: float
    threshold: float
    region_samples: int
    verification_checked: int
    verification_violations: int

    def to_dict(self):
        return asdict(self)


def _pinching_quantity(spec, lam):
    """K/F^n for convex F, K/H^n for concave F."""
    n = lam.shape[-1]
    K = np.prod(lam, axis=-1)
    if spec.declared_class == 'convex':
        base = np.asarray(evaluate(spec, lam, order=0).value)
    else:
        base = np.sum(lam, axis=-1)
    return K / base ** n


def _region_bound(spec, lam, epsilon):
    """eps n F for convex F, eps H for concave F."""
    n = lam.shape[-1]
    if spec.declared_class == 'convex':
        return epsilon * n * np.asarray(evaluate(spec, lam, order=0).value)
    return epsilon * np.sum(lam, axis=-1)


def _boundary_samples(spec, n, epsilon, samples, rng):
    """Vectors whose smallest entry sits on the region boundary."""
    rest = 10.0 ** rng.uniform(-1.0, 1.0, size=(samples, n - 1))
    if spec.declared_class == 'concave':
        first = epsilon * np.sum(rest, axis=-1) / (1.0 - epsilon)
        return np.column_stack([first, rest])

    top = np.max(rest, axis=-1)
    lo = 1e-10 * top
    hi = 1e6 * top

    def excess(t):
        lam = np.column_stack([t, rest])
        return t - _region_bound(spec, lam, epsilon)

    ok = (excess(lo) < 0.0) & (excess(hi) > 0.0)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        positive = excess(mid) > 0.0
        hi = np.where(positive, mid, hi)
        lo = np.where(positive, lo, mid)
    return np.column_stack([0.5 * (lo + hi), rest])[ok]


def pinching_threshold(spec, n, epsilon, samples, seed):
    """
    Measure the constant that forces lam_1 above eps n F (convex) or eps H (concave).

    The supremum M of K/F^n (K/H^n) over {lam_1 <= eps n F} ({lam_1 <= eps H})
    is estimated from interior and boundary samples; any vector with
    K > M F^n (K > M H^n) then lies outside that region. A verification
    pass over fresh samples counts vectors that contradict this.

    Args:
        spec (CurvatureSpec): Registry member
        n (int): Dimension, n >= 2
        epsilon (float): Pinching level in (0, 1/n)
        samples (int): Number of samples per pass
        seed (int): Seed of the numpy generator

    Returns:
        PinchingThreshold: The measured constant and verification counts
    """
    if not 0.0 < epsilon < 1.0 / n:
        raise ValueError(f"epsilon={epsilon} must lie in (0, 1/n)")
    rng = np.random.default_rng(seed)

    interior = sample_cone(n, samples, seed)
    inside = interior[interior[:, 0] <= _region_bound(spec, interior, epsilon)]
    boundary = _boundary_samples(spec, n, epsilon, samples, rng)
    region = np.concatenate([inside, boundary]) if len(boundary) else inside
    threshold = float(np.max(_pinching_quantity(spec, region))) if len(region) else 0.0

    fresh = np.concatenate([sample_cone(n, samples, seed + 1),
                            np.sort(10.0 ** rng.uniform(-1.0, 1.0, size=(samples, n)), axis=-1)])
    pinched = fresh[_pinching_quantity(spec, fresh) > threshold]
    violations = int(np.sum(pinched[:, 0] <= _region_bound(spec, pinched, epsilon)))

    return PinchingThreshold(
        spec=spec.name,
        declared_class=spec.declared_class,
        n=n,
        epsilon=float(epsilon),
        threshold=threshold,
        region_samples=int(len(region)),
        verification_checked=int(len(pinched)),
        verification_violations=violations,
    )
