#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Initial Bodies

Closed-form strictly convex bodies used as initial data. Each body knows its
support function and, where closed forms exist, its volume, surface area and
principal radii, which serve as oracles for the discrete geometry.
"""

import numpy as np
from scipy.special import ellipeinc, ellipkinc, eval_legendre

from mvflow.geometry.measures import sphere_area, unit_ball_volume
from mvflow.geometry.support import AxisymProfile, SphereGrid2D
from mvflow.utils.error_handler import ConvexityLossError, DomainError
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Perturbed spheres must keep every radius above this fraction of R
AMPLITUDE_GUARD = 0.05


class Body:
    """
    Base class of the closed-form bodies.

    Attributes:
        n (int): Hypersurface dimension
        axisymmetric (bool): Whether the body is a body of revolution about the last axis
    """
    kind = None
    axisymmetric = True

    def __init__(self, n):
        if n < 2:
            raise DomainError(f"dimension n={n} must be >= 2")
        self.n = int(n)

    def support(self, theta, phi=None):
        """Support value at polar angle theta (and azimuth phi)."""
        raise NotImplementedError

    def volume(self):
        return None

    def area(self):
        return None

    def radii(self, theta):
        """Closed-form principal radii (meridian, rotational), or None."""
        return None

    def extreme_radii(self):
        """Closed-form (rho_-, rho_+) about the centre, or None."""
        return None

    def params(self):
        return {}

    def to_dict(self):
        return {'kind': self.kind, 'params': self.params()}

    def grid(self, backend='axisym', resolution=256, fd_order=2):
        """
        Sample the support function on a grid.

        Args:
            backend (str): 'axisym' or 'sphere2d'
            resolution: N for 'axisym', (n_theta, n_phi) for 'sphere2d'
            fd_order (int, optional): Finite-difference order of the axisymmetric grid

        Returns:
            SupportGrid: The sampled grid
        """
        if backend == 'axisym':
            if not self.axisymmetric:
                raise DomainError(f"{self.kind} is not a body of revolution")
            return AxisymProfile.from_function(self.n, self.support, int(resolution), fd_order)
        if backend == 'sphere2d':
            if self.n != 2:
                raise DomainError("the sphere2d backend requires n = 2")
            n_theta, n_phi = resolution
            return SphereGrid2D.from_function(self.support, n_theta, n_phi)
        raise DomainError(f"unknown backend '{backend}'")


class Sphere(Body):
    kind = 'sphere'

    def __init__(self, n, radius=1.0):
        super().__init__(n)
        if radius <= 0.0:
            raise DomainError(f"radius={radius} must be positive")
        self.radius = float(radius)

    def support(self, theta, phi=None):
        return np.full(np.shape(theta), self.radius)

    def volume(self):
        return unit_ball_volume(self.n + 1) * self.radius ** (self.n + 1)

    def area(self):
        return sphere_area(self.n) * self.radius ** self.n

    def radii(self, theta):
        r = np.full(np.shape(theta), self.radius)
        return r, r

    def extreme_radii(self):
        return self.radius, self.radius

    def params(self):
        return {'radius': self.radius}


class Spheroid(Body):
    """Spheroid with semi-axes (a, ..., a, c), c along the symmetry axis."""
    kind = 'spheroid'

    def __init__(self, n, a=1.0, c=1.0):
        super().__init__(n)
        if a <= 0.0 or c <= 0.0:
            raise DomainError(f"semi-axes a={a}, c={c} must be positive")
        self.a, self.c = float(a), float(c)

    def support(self, theta, phi=None):
        return np.sqrt((self.a * np.sin(theta)) ** 2 + (self.c * np.cos(theta)) ** 2)

    def volume(self):
        return unit_ball_volume(self.n + 1) * self.a ** self.n * self.c

    def area(self):
        if self.n != 2:
            return None
        a, c = self.a, self.c
        if np.isclose(a, c, rtol=1e-15, atol=0.0):
            return 4.0 * np.pi * a * a
        if c > a:
            e = np.sqrt(1.0 - (a / c) ** 2)
            return 2.0 * np.pi * a * a * (1.0 + c / (a * e) * np.arcsin(e))
        e = np.sqrt(1.0 - (c / a) ** 2)
        return 2.0 * np.pi * a * a * (1.0 + (1.0 - e * e) / e * np.arctanh(e))

    def radii(self, theta):
        h = self.support(theta)
        return (self.a * self.c) ** 2 / h ** 3, self.a ** 2 / h

    def extreme_radii(self):
        return min(self.a, self.c), max(self.a, self.c)

    def params(self):
        return {'a': self.a, 'c': self.c}


class Ellipsoid(Body):
    """Triaxial ellipsoid in R^3 with semi-axes (a, b, c)."""
    kind = 'ellipsoid'
    axisymmetric = False

    def __init__(self, n=2, a=1.0, b=1.0, c=1.0):
        super().__init__(n)
        if n != 2:
            raise DomainError("ellipsoids are available for n = 2 only")
        if min(a, b, c) <= 0.0:
            raise DomainError(f"semi-axes ({a}, {b}, {c}) must be positive")
        self.a, self.b, self.c = float(a), float(b), float(c)

    def support(self, theta, phi=None):
        phi = np.zeros_like(theta) if phi is None else phi
        st = np.sin(theta)
        return np.sqrt((self.a * st * np.cos(phi)) ** 2 + (self.b * st * np.sin(phi)) ** 2
                       + (self.c * np.cos(theta)) ** 2)

    def volume(self):
        return 4.0 / 3.0 * np.pi * self.a * self.b * self.c

    def area(self):
        a, b, c = sorted((self.a, self.b, self.c), reverse=True)
        if np.isclose(a, c, rtol=1e-15, atol=0.0):
            return 4.0 * np.pi * a * a
        angle = np.arccos(c / a)
        m = (a * a * (b * b - c * c)) / (b * b * (a * a - c * c))
        s = np.sin(angle)
        return 2.0 * np.pi * c * c + 2.0 * np.pi * a * b / s * (
            ellipeinc(angle, m) * s * s + ellipkinc(angle, m) * (1.0 - s * s))

    def extreme_radii(self):
        return min(self.a, self.b, self.c), max(self.a, self.b, self.c)

    def params(self):
        return {'a': self.a, 'b': self.b, 'c': self.c}


class PerturbedSphere(Body):
    """
    Sphere of radius R plus eps * P_l(cos theta), or on the 2-D backend the
    sectoral mode eps * sin^l(theta) cos(l phi).
    """
    kind = 'perturbed_sphere'

    def __init__(self, n, radius=1.0, eps=0.1, l=2, sectoral=False):
        super().__init__(n)
        if radius <= 0.0:
            raise DomainError(f"radius={radius} must be positive")
        if int(l) < 1:
            raise DomainError(f"mode l={l} must be >= 1")
        if sectoral and n != 2:
            raise DomainError("sectoral perturbations need n = 2")
        self.radius, self.eps, self.l = float(radius), float(eps), int(l)
        self.sectoral = bool(sectoral)
        self.axisymmetric = not self.sectoral
        self._check_amplitude()

    def support(self, theta, phi=None):
        if self.sectoral:
            phi = np.zeros_like(theta) if phi is None else phi
            mode = np.sin(theta) ** self.l * np.cos(self.l * phi)
        else:
            mode = eval_legendre(self.l, np.cos(theta))
        return self.radius + self.eps * mode

    def volume(self):
        return None

    def _check_amplitude(self):
        if self.sectoral:
            dense = SphereGrid2D.from_function(self.support, 128, 256)
        else:
            dense = AxisymProfile.from_function(self.n, self.support, 2048, fd_order=4)
        try:
            smallest = float(np.min(dense.principal_radii()))
        except ConvexityLossError as exc:
            raise DomainError(f"perturbation eps={self.eps}, l={self.l} is not convex") from exc
        if smallest < AMPLITUDE_GUARD * self.radius:
            raise DomainError(
                f"perturbation eps={self.eps}, l={self.l} drives radii to {smallest:.3e}, "
                f"below {AMPLITUDE_GUARD} R")
        logger.debug(f"Perturbed sphere l={self.l}: smallest dense radius {smallest:.4f}")

    def params(self):
        return {'radius': self.radius, 'eps': self.eps, 'l': self.l, 'sectoral': self.sectoral}


BODY_KINDS = {
    'sphere': Sphere,
    'spheroid': Spheroid,
    'ellipsoid': Ellipsoid,
    'perturbed_sphere': PerturbedSphere,
}


def make_body(kind, params, n):
    """
    Build an initial body from a descriptor.

    Args:
        kind (str): One of BODY_KINDS
        params (dict): Constructor parameters
        n (int): Hypersurface dimension

    Returns:
        Body: The body

    Raises:
        DomainError: On an unknown kind or invalid parameters
    """
    if kind not in BODY_KINDS:
        raise DomainError(f"unknown initial body '{kind}'")
    try:
        return BODY_KINDS[kind](n, **(params or {}))
    except TypeError as exc:
        raise DomainError(f"invalid parameters for {kind}: {exc}") from exc
