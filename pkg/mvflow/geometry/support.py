#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Support-Function Grids

This module provides the discrete support-function representations of
strictly convex bodies over the unit normal sphere:

- AxisymProfile: bodies of revolution in R^(n+1), sampled on a uniform polar
  grid theta_j = j pi / N, for any n >= 2.
- SphereGrid2D: general convex bodies in R^3 on a latitude-longitude grid
  with shared pole values.

Principal radii come from finite differences of h, principal curvatures are
their reciprocals, and the area element is prod(R_i) times the sphere
measure. The difference quotients divide by the stencil applied to
cos(theta) instead of powers of the spacing, so they are exact on constants
and first harmonics: a translation adds v.u to h and leaves every radius
unchanged up to round-off. Grids are immutable values; a new grid is built for every new h.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np
from cachetools import cached, LRUCache
from scipy.interpolate import CubicSpline

from mvflow.curvature.functions import binomial
from mvflow.curvature.symmetric import elementary_symmetric_all
from mvflow.geometry.measures import polar_weights, sphere_area, unit_ball_volume
from mvflow.utils.error_handler import ConvexityLossError, DomainError
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Radii must stay above this fraction of max(h)
POSITIVITY_FLOOR = 1e-10

MIN_RESOLUTION = 16


@dataclass
class NodeCurvature:
    """
    Per-node curvature data of a grid.

    Attributes:
        radii (numpy.ndarray): Principal radii, shape (nodes, n), descending
        lam (numpy.ndarray): Principal curvatures 1/R, shape (nodes, n), ascending
        weights (numpy.ndarray): Area weights prod(R) * sphere weight
        sphere_weights (numpy.ndarray): Quadrature weights of the unit sphere
        radius_symmetric (numpy.ndarray): E_0..E_n of the radii, shape (nodes, n + 1)
    """
    radii: np.ndarray
    lam: np.ndarray
    weights: np.ndarray
    sphere_weights: np.ndarray
    radius_symmetric: np.ndarray

    @property
    def area(self):
        return float(np.sum(self.weights))

    def curvature_integrand(self, m):
        """E_m(lam) * prod(R) per node, i.e. E_{n-m}(R), times the sphere weight."""
        n = self.lam.shape[1]
        return self.radius_symmetric[:, n - m] * self.sphere_weights


class SupportGrid(ABC):
    """
    Base class of the support-function grids.

    Subclasses supply the finite-difference radii, the sphere quadrature, the
    unit normals of the nodes and resampling.
    """

    def __init__(self, n, h):
        if n < 2:
            raise DomainError(f"dimension n={n} must be >= 2")
        self.n = int(n)
        h = np.array(h, dtype=float)
        h.setflags(write=False)
        self._h = h
        self._curvature = None

    @property
    def h(self):
        return self._h

    @property
    def node_count(self):
        return self._h.size

    @abstractmethod
    def principal_radii(self):
        """Principal radii per node, shape (nodes, n)."""

    @abstractmethod
    def sphere_weights(self):
        """Quadrature weights of the unit sphere S^n, one per node."""

    @abstractmethod
    def normals(self):
        """Unit normals u of the nodes, shape (nodes, n + 1)."""

    @abstractmethod
    def with_values(self, h):
        """A grid of the same layout carrying new support values."""

    @abstractmethod
    def resample(self, resolution):
        """Interpolate onto a grid of another resolution."""

    @abstractmethod
    def spacing(self):
        """Grid spacing entering the explicit stability bound."""

    @property
    def stability_scale(self):
        return 1.0

    def positivity_floor(self):
        return POSITIVITY_FLOOR * float(np.max(self._h))

    def _descending(self, radii):
        return -np.sort(-radii, axis=1)

    def _check_radii(self, radii):
        floor = self.positivity_floor()
        smallest = np.min(radii, axis=1)
        bad = ~np.isfinite(smallest) | (smallest <= floor)
        if np.any(bad):
            node = int(np.argmax(bad))
            logger.warning(f"Radius {smallest[node]:.6e} at node {node} below floor {floor:.3e}")
            raise ConvexityLossError(node, smallest[node], floor)
        return radii

    def curvatures(self):
        """
        Per-node NodeCurvature, computed once per grid.

        Raises:
            ConvexityLossError: If a radius drops below the positivity floor
        """
        if self._curvature is None:
            radii = self._descending(self.principal_radii())
            sigma = self.sphere_weights()
            esr = elementary_symmetric_all(radii)
            self._curvature = NodeCurvature(
                radii=radii,
                lam=1.0 / radii,
                weights=esr[:, self.n] * sigma,
                sphere_weights=sigma,
                radius_symmetric=esr,
            )
        return self._curvature

    def translated(self, v):
        """Support values of the body shifted by the vector v."""
        v = np.asarray(v, dtype=float)
        return self.with_values(self._h + self.normals() @ v)


@dataclass(frozen=True)
class PolarStencil:
    """
    Layout shared by every axisymmetric profile with N intervals.

    Attributes:
        theta (numpy.ndarray): Polar nodes j pi / N
        cot (numpy.ndarray): cot(theta), zero at the poles
        first (float): First-difference numerator applied to cos, divided by -sin
        second (float): Second-difference numerator applied to cos, divided by -cos
    """
    theta: np.ndarray
    cot: np.ndarray
    first: float
    second: float


@cached(cache=LRUCache(maxsize=32))
def polar_stencil(N, fd_order):
    """
    Polar nodes and the denominators of the difference quotients.

    The denominators replace 2d and d^2 (12d and 12d^2 for the five-point
    stencils) by the values that make both quotients exact on cos(theta)
    and sin(theta); they agree with the plain ones to the order of the stencil.

    Args:
        N (int): Number of intervals
        fd_order (int): 2 or 4

    Returns:
        PolarStencil: Read-only layout
    """
    d = np.pi / N
    theta = np.linspace(0.0, np.pi, N + 1)
    cot = np.zeros(N + 1)
    cot[1:-1] = 1.0 / np.tan(theta[1:-1])
    theta.setflags(write=False)
    cot.setflags(write=False)
    if fd_order == 2:
        first, second = 2.0 * np.sin(d), 2.0 * (1.0 - np.cos(d))
    else:
        first = 2.0 * (8.0 * np.sin(d) - np.sin(2.0 * d))
        second = 30.0 - 32.0 * np.cos(d) + 2.0 * np.cos(2.0 * d)
    return PolarStencil(theta=theta, cot=cot, first=float(first), second=float(second))


@cached(cache=LRUCache(maxsize=32))
def _rotation_weights(N, n):
    """Polar weights times the area of the S^(n-1) orbits."""
    weights = sphere_area(n - 1) * polar_weights(N, n)
    weights.setflags(write=False)
    return weights


class AxisymProfile(SupportGrid):
    """
    Support function of a body of revolution, h(theta) on N + 1 polar nodes.

    Derivatives use reflected ghost nodes, so h'(0) = h'(pi) = 0 discretely.
    """

    def __init__(self, n, h, fd_order=2):
        super().__init__(n, h)
        if self._h.ndim != 1 or self._h.size < 3:
            raise DomainError("axisymmetric profile needs at least 3 nodes")
        if fd_order not in (2, 4):
            raise DomainError(f"fd_order={fd_order} must be 2 or 4")
        self.fd_order = fd_order
        self.N = self._h.size - 1
        self.stencil = polar_stencil(self.N, fd_order)
        self.theta = self.stencil.theta
        self.delta = np.pi / self.N

    @classmethod
    def from_function(cls, n, func, N, fd_order=2):
        theta = np.linspace(0.0, np.pi, N + 1)
        return cls(n, func(theta), fd_order=fd_order)

    def principal_radii(self):
        return principal_radii_axisym(self)

    def _descending(self, radii):
        # columns are the meridian radius followed by n - 1 equal rotational radii
        big = np.maximum(radii[:, 0], radii[:, -1])
        small = np.minimum(radii[:, 0], radii[:, -1])
        return np.column_stack([big] + [radii[:, 1]] * (self.n - 2) + [small])

    def sphere_weights(self):
        return _rotation_weights(self.N, self.n)

    def normals(self):
        # Rotation-averaged normals: transverse components integrate to zero
        u = np.zeros((self.N + 1, self.n + 1))
        u[:, -1] = np.cos(self.theta)
        return u

    def translated(self, v):
        v = np.asarray(v, dtype=float)
        if np.any(v[:-1] != 0.0):
            raise DomainError("axisymmetric profiles translate along the axis only")
        return super().translated(v)

    def with_values(self, h):
        return AxisymProfile(self.n, h, fd_order=self.fd_order)

    def spacing(self):
        return self.delta

    @property
    def stability_scale(self):
        # five-point second difference has spectral radius 16/3 instead of 4
        return 1.0 if self.fd_order == 2 else 0.75

    def resample(self, resolution):
        """
        Periodic cubic spline of the even extension of h onto N' + 1 nodes.

        Args:
            resolution (int): New number of intervals N', >= 16

        Returns:
            AxisymProfile: Resampled profile
        """
        resolution = int(resolution)
        if resolution < MIN_RESOLUTION:
            raise DomainError(f"resolution {resolution} below minimum {MIN_RESOLUTION}")
        if resolution == self.N:
            return self.with_values(self._h.copy())
        circle = np.concatenate([self._h, self._h[-2::-1]])
        psi = np.linspace(0.0, 2.0 * np.pi, 2 * self.N + 1)
        spline = CubicSpline(psi, circle, bc_type='periodic')
        theta = np.linspace(0.0, np.pi, resolution + 1)
        return AxisymProfile(self.n, spline(theta), fd_order=self.fd_order)

    def coordinates(self):
        """Node coordinates as a dict of columns."""
        return {'theta': self.theta}


def principal_radii_axisym(profile):
    """
    Principal radii of a body of revolution from its support profile.

    The meridian radius is h'' + h and the n - 1 rotational radii are
    h' cot(theta) + h, replaced at the poles by the limit h'' + h.

    Args:
        profile (AxisymProfile): Support profile

    Returns:
        numpy.ndarray: Radii, shape (N + 1, n), meridian column first

    Raises:
        ConvexityLossError: If a radius drops below the positivity floor
    """
    h = profile.h
    N, stencil = profile.N, profile.stencil
    # reflected ghost nodes, two on each side
    pad = np.concatenate((h[2:0:-1], h, h[-2:-4:-1]))
    if profile.fd_order == 2:
        d1 = (pad[3:N + 4] - pad[1:N + 2]) / stencil.first
        d2 = (pad[3:N + 4] - 2.0 * pad[2:N + 3] + pad[1:N + 2]) / stencil.second
    else:
        d1 = (-pad[4:] + 8.0 * pad[3:N + 4] - 8.0 * pad[1:N + 2] + pad[:N + 1]) / stencil.first
        d2 = (-pad[4:] + 16.0 * pad[3:N + 4] - 30.0 * pad[2:N + 3]
              + 16.0 * pad[1:N + 2] - pad[:N + 1]) / stencil.second

    r_mer = d2 + h
    r_rot = d1 * stencil.cot + h
    r_rot[0], r_rot[-1] = r_mer[0], r_mer[-1]

    radii = np.column_stack([r_mer] + [r_rot] * (profile.n - 1))
    return profile._check_radii(radii)


class SphereGrid2D(SupportGrid):
    """
    Support function of a convex body in R^3 on a latitude-longitude grid.

    Storage is flat: [north pole, (n_theta - 1) rows of n_phi values, south pole].
    """

    def __init__(self, h, n_theta, n_phi):
        super().__init__(2, h)
        self.n_theta, self.n_phi = int(n_theta), int(n_phi)
        if self.n_phi < 8 or self.n_phi % 2:
            raise DomainError(f"n_phi={n_phi} must be even and >= 8")
        if self.n_theta < 4:
            raise DomainError(f"n_theta={n_theta} must be >= 4")
        expected = 2 + (self.n_theta - 1) * self.n_phi
        if self._h.size != expected:
            raise DomainError(f"expected {expected} support values, got {self._h.size}")
        self.theta = np.linspace(0.0, np.pi, self.n_theta + 1)
        self.phi = np.arange(self.n_phi) * (2.0 * np.pi / self.n_phi)
        self.d_theta = np.pi / self.n_theta
        self.d_phi = 2.0 * np.pi / self.n_phi

    @classmethod
    def from_function(cls, func, n_theta, n_phi):
        """Sample func(theta, phi) on the grid nodes."""
        theta = np.linspace(0.0, np.pi, n_theta + 1)
        phi = np.arange(n_phi) * (2.0 * np.pi / n_phi)
        north = float(np.asarray(func(np.zeros(1), np.zeros(1)))[0])
        south = float(np.asarray(func(np.full(1, np.pi), np.zeros(1)))[0])
        tt, pp = np.meshgrid(theta[1:-1], phi, indexing='ij')
        rows = np.asarray(func(tt, pp), dtype=float)
        return cls(np.concatenate([[north], rows.ravel(), [south]]), n_theta, n_phi)

    def _split(self, h=None):
        h = self._h if h is None else h
        rows = h[1:-1].reshape(self.n_theta - 1, self.n_phi)
        return h[0], rows, h[-1]

    def principal_radii(self):
        north, rows, south = self._split()
        n_phi, dt, dp = self.n_phi, self.d_theta, self.d_phi
        full = np.vstack([np.full(n_phi, north), rows, np.full(n_phi, south)])
        up, down = full[2:], full[:-2]

        def roll(a, k):
            return np.roll(a, k, axis=1)

        # denominators fitted to cos and sin, as in polar_stencil()
        h_t = (up - down) / (2.0 * np.sin(dt))
        h_tt = (up - 2.0 * rows + down) / (2.0 * (1.0 - np.cos(dt)))
        h_p = (roll(rows, -1) - roll(rows, 1)) / (2.0 * np.sin(dp))
        h_pp = (roll(rows, -1) - 2.0 * rows + roll(rows, 1)) / (2.0 * (1.0 - np.cos(dp)))
        h_tp = (roll(up, -1) - roll(up, 1) - roll(down, -1) + roll(down, 1)) \
            / (4.0 * np.sin(dt) * np.sin(dp))

        th = self.theta[1:-1, None]
        s, cot = np.sin(th), np.cos(th) / np.sin(th)
        a11 = h_tt + rows
        a12 = (h_tp - cot * h_p) / s
        a22 = h_pp / (s * s) + cot * h_t + rows
        mean = 0.5 * (a11 + a22)
        dev = np.sqrt(0.25 * (a11 - a22) ** 2 + a12 ** 2)

        interior = np.column_stack([(mean + dev).ravel(), (mean - dev).ravel()])
        radii = np.vstack([self._pole_radii(north, rows[0]),
                           interior,
                           self._pole_radii(south, rows[-1])])
        return self._check_radii(radii)

    def _descending(self, radii):
        # mean + dev comes first at every node
        return radii

    def _pole_radii(self, h0, ring):
        """Tangent-plane Hessian at a pole from the 0th and 2nd Fourier modes of the first ring."""
        # squared chord to the first ring
        dt2 = 2.0 * (1.0 - np.cos(self.d_theta))
        c2 = 2.0 * np.mean(ring * np.cos(2.0 * self.phi))
        s2 = 2.0 * np.mean(ring * np.sin(2.0 * self.phi))
        trace = 4.0 * (np.mean(ring) - h0) / dt2
        diff = 4.0 * c2 / dt2
        m12 = 2.0 * s2 / dt2
        dev = np.sqrt(0.25 * diff * diff + m12 * m12)
        return np.array([[0.5 * trace + h0 + dev, 0.5 * trace + h0 - dev]])

    def sphere_weights(self):
        w = polar_weights(self.n_theta, 2)
        rows = np.repeat(w[1:-1] * self.d_phi, self.n_phi)
        return np.concatenate([[w[0] * 2.0 * np.pi], rows, [w[-1] * 2.0 * np.pi]])

    def normals(self):
        tt, pp = np.meshgrid(self.theta[1:-1], self.phi, indexing='ij')
        rows = np.column_stack([(np.sin(tt) * np.cos(pp)).ravel(),
                                (np.sin(tt) * np.sin(pp)).ravel(),
                                np.cos(tt).ravel()])
        return np.vstack([[0.0, 0.0, 1.0], rows, [0.0, 0.0, -1.0]])

    def with_values(self, h):
        return SphereGrid2D(h, self.n_theta, self.n_phi)

    def spacing(self):
        return min(self.d_theta, np.sin(self.d_theta) * self.d_phi)

    @property
    def stability_scale(self):
        return 0.5

    def resample(self, resolution):
        """
        Cubic resampling onto an (n_theta', n_phi') grid.

        Each meridian great circle through both poles is interpolated by a
        periodic spline in the polar angle, then every new row by a periodic
        spline in phi.

        Args:
            resolution (tuple): (n_theta', n_phi'), n_theta' >= 16

        Returns:
            SphereGrid2D: Resampled grid
        """
        n_theta, n_phi = (int(r) for r in resolution)
        if n_theta < MIN_RESOLUTION:
            raise DomainError(f"resolution {n_theta} below minimum {MIN_RESOLUTION}")
        if (n_theta, n_phi) == (self.n_theta, self.n_phi):
            return self.with_values(self._h.copy())

        north, rows, south = self._split()
        half = self.n_phi // 2
        psi = np.linspace(0.0, 2.0 * np.pi, 2 * self.n_theta + 1)
        new_theta = np.linspace(0.0, np.pi, n_theta + 1)[1:-1]
        meridians = np.empty((n_theta - 1, self.n_phi))
        for j in range(half):
            circle = np.concatenate([[north], rows[:, j], [south], rows[::-1, j + half], [north]])
            spline = CubicSpline(psi, circle, bc_type='periodic')
            meridians[:, j] = spline(new_theta)
            meridians[:, j + half] = spline(2.0 * np.pi - new_theta)

        if n_phi == self.n_phi:
            new_rows = meridians
        else:
            x = np.append(self.phi, 2.0 * np.pi)
            values = np.hstack([meridians, meridians[:, :1]])
            spline = CubicSpline(x, values, axis=1, bc_type='periodic')
            new_rows = spline(np.arange(n_phi) * (2.0 * np.pi / n_phi))
        return SphereGrid2D(np.concatenate([[north], new_rows.ravel(), [south]]), n_theta, n_phi)

    def coordinates(self):
        tt, pp = np.meshgrid(self.theta[1:-1], self.phi, indexing='ij')
        return {
            'theta': np.concatenate([[0.0], tt.ravel(), [np.pi]]),
            'phi': np.concatenate([[0.0], pp.ravel(), [0.0]]),
        }


def _grid(state):
    """Accept a grid or anything carrying one (such as a flow state)."""
    return getattr(state, 'grid', state)


def curvatures(state):
    """Per-node NodeCurvature of a grid or flow state."""
    return _grid(state).curvatures()


def surface_integral(state, field):
    """
    Area integral sum(field * w) of a per-node field.

    Args:
        state: Grid or flow state
        field (array_like): One value per node, or a scalar

    Returns:
        float: The integral
    """
    w = curvatures(state).weights
    return float(np.sum(np.broadcast_to(np.asarray(field, dtype=float), w.shape) * w))


def mixed_volume(state, m):
    """
    Mixed volume V_{n-m}.

    For m >= 0 this is [(n+1) C(n,m)]^-1 int E_m dmu; for m = -1 it is the
    enclosed volume (n+1)^-1 int h dmu.

    Args:
        state: Grid or flow state
        m (int): Index in -1..n

    Returns:
        float: V_{n-m}
    """
    grid = _grid(state)
    n = grid.n
    if not -1 <= m <= n:
        raise DomainError(f"mixed volume index m={m} outside -1..{n}")
    curv = grid.curvatures()
    if m == -1:
        return float(np.sum(grid.h * curv.weights)) / (n + 1)
    return float(np.sum(curv.curvature_integrand(m))) / ((n + 1) * binomial(n, m))


def mixed_volumes(state):
    """All mixed volumes V_0..V_{n+1}, with V_{n+1} the enclosed volume."""
    n = _grid(state).n
    return [mixed_volume(state, n - k) for k in range(n + 1)] + [mixed_volume(state, -1)]


def steiner_point(state):
    """
    Steiner point (1/omega_{n+1}) int h u dsigma of the body.

    Returns:
        numpy.ndarray: Point in R^(n+1)
    """
    grid = _grid(state)
    sigma = grid.sphere_weights()
    return (grid.normals().T @ (grid.h * sigma)) / unit_ball_volume(grid.n + 1)


@dataclass
class RadiusBounds:
    """
    Inner and outer radius bounds about the Steiner point.

    Attributes:
        rho_minus (float): Smallest recentred support value
        rho_plus (float): Largest recentred support value
        steiner (numpy.ndarray): Steiner point
        pinch_ratio (float): max lam_n / lam_1 over the nodes
        bound (float): ((n + 2) / sqrt(2)) * pinch_ratio
    """
    rho_minus: float
    rho_plus: float
    steiner: np.ndarray
    pinch_ratio: float
    bound: float

    @property
    def ratio(self):
        return self.rho_plus / self.rho_minus

    @property
    def bound_holds(self):
        return self.ratio <= self.bound

    def to_dict(self):
        return {
            'rho_minus': self.rho_minus,
            'rho_plus': self.rho_plus,
            'steiner': [float(x) for x in self.steiner],
            'ratio': self.ratio,
            'pinch_ratio': self.pinch_ratio,
            'bound': self.bound,
            'bound_holds': bool(self.bound_holds),
        }


def recentred_support(state):
    """Support values about the Steiner point, h - <s, u>."""
    grid = _grid(state)
    return grid.h - grid.normals() @ steiner_point(grid)


def radii_bounds(state):
    """
    Radius bounds (rho_-, rho_+) about the Steiner point with the pinching bound check.

    Args:
        state: Grid or flow state

    Returns:
        RadiusBounds: Bounds and the ratio check against ((n+2)/sqrt(2)) max lam_n/lam_1
    """
    grid = _grid(state)
    s = steiner_point(grid)
    centred = grid.h - grid.normals() @ s
    lam = grid.curvatures().lam
    pinch = float(np.max(lam[:, -1] / lam[:, 0]))
    return RadiusBounds(
        rho_minus=float(np.min(centred)),
        rho_plus=float(np.max(centred)),
        steiner=s,
        pinch_ratio=pinch,
        bound=(grid.n + 2) / np.sqrt(2.0) * pinch,
    )


def resample(state, resolution):
    """Interpolate a grid onto a new resolution (N, or (n_theta, n_phi) in 2-D)."""
    return _grid(state).resample(resolution)
