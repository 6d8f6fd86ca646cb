"""Spheres and ellipsoids: closed-form pedals, implicit equations, convexity predicate."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSurface, PreconditionViolated
from .surface import ParamSurface3, stack3


@dataclass(frozen=True)
class EllipsoidSpec:
    """Ellipsoid x = k + a sin v cos u, y = b sin v sin u, z = c cos v."""

    a: float
    b: float
    c: float
    k: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > 0 and self.k >= 0):
            raise PreconditionViolated("ellipsoid needs positive semi-axes and k >= 0")

    def surface(self) -> ParamSurface3:
        a, b, c, k = self.a, self.b, self.c, self.k

        def ev(u, v):
            return stack3(k + a * np.sin(v) * np.cos(u), b * np.sin(v) * np.sin(u), c * np.cos(v))

        def du(u, v):
            return stack3(-a * np.sin(v) * np.sin(u), b * np.sin(v) * np.cos(u), 0.0 * u * v)

        def dv(u, v):
            return stack3(a * np.cos(v) * np.cos(u), b * np.cos(v) * np.sin(u), -c * np.sin(v))

        def duu(u, v):
            return stack3(-a * np.sin(v) * np.cos(u), -b * np.sin(v) * np.sin(u), 0.0 * u * v)

        def duv(u, v):
            return stack3(-a * np.cos(v) * np.sin(u), b * np.cos(v) * np.cos(u), 0.0 * u * v)

        def dvv(u, v):
            return stack3(-a * np.sin(v) * np.cos(u), -b * np.sin(v) * np.sin(u), -c * np.cos(v))

        return ParamSurface3(ev, du, dv, duu, duv, dvv, center=(k, 0.0, 0.0))

    def normal_field(self, u, v) -> np.ndarray:
        """Exterior normal (bc sin v cos u, ac sin v sin u, ab cos v), not normalised."""
        a, b, c = self.a, self.b, self.c
        s = np.sin(v)
        return stack3(b * c * s * np.cos(u), a * c * s * np.sin(u), a * b * np.cos(v))

    def normal_norm2(self, u, v):
        return np.sum(self.normal_field(u, v) ** 2, axis=-1)

    def factor(self, u, v):
        """k cos u sin v + a."""
        return self.k * np.cos(u) * np.sin(v) + self.a


@dataclass(frozen=True)
class SphereSpec:
    """Sphere of radius r centred at (k, 0, 0)."""

    r: float
    k: float

    def __post_init__(self):
        if not (self.r > 0 and self.k >= 0):
            raise PreconditionViolated("sphere needs r > 0 and k >= 0")

    def surface(self) -> ParamSurface3:
        return self.as_ellipsoid().surface()

    def as_ellipsoid(self) -> EllipsoidSpec:
        return EllipsoidSpec(self.r, self.r, self.r, self.k)

    def pedal(self, u, v) -> np.ndarray:
        A = np.cos(u) * np.sin(v)
        rad = self.r + self.k * A
        return rad[..., None] * stack3(A, np.sin(u) * np.sin(v), np.cos(v) + 0.0 * u)

    def det2_product(self, u, v):
        """sin^2 v (3Akr + 2k^2 + r^2)(Ak + r)(2Ak + r), A = cos u sin v."""
        r, k = self.r, self.k
        A = np.cos(u) * np.sin(v)
        return np.sin(v) ** 2 * (3 * A * k * r + 2 * k * k + r * r) * (A * k + r) * (2 * A * k + r)


def limacon_surface_implicit(spec: SphereSpec, pt) -> np.ndarray:
    x = np.asarray(pt, dtype=float)
    rho2 = np.sum(x * x, axis=-1)
    return rho2 - spec.r * np.sqrt(rho2) - spec.k * x[..., 0]


def limacon_surface_gradient(spec: SphereSpec, pt) -> np.ndarray:
    x = np.asarray(pt, dtype=float)
    rho = np.linalg.norm(x, axis=-1)[..., None]
    g = 2 * x - spec.r * x / rho
    g[..., 0] -= spec.k
    return g


def sphere_pedal_convex(spec: SphereSpec) -> bool:
    return spec.r > 2 * spec.k


def ellipsoid_pedal_implicit(spec: EllipsoidSpec, pt) -> np.ndarray:
    x = np.asarray(pt, dtype=float)
    rho2 = np.sum(x * x, axis=-1)
    axes2 = np.array([spec.a, spec.b, spec.c]) ** 2
    return (rho2 - spec.k * x[..., 0]) ** 2 - np.sum(axes2 * x * x, axis=-1)


def ellipsoid_pedal_gradient(spec: EllipsoidSpec, pt) -> np.ndarray:
    x = np.asarray(pt, dtype=float)
    q = np.sum(x * x, axis=-1) - spec.k * x[..., 0]
    dq = 2 * x
    dq[..., 0] -= spec.k
    axes2 = np.array([spec.a, spec.b, spec.c]) ** 2
    return 2 * q[..., None] * dq - 2 * axes2 * x


def ellipsoid_pedal_closed_form(spec: EllipsoidSpec, u, v) -> np.ndarray:
    """Pedal of the ellipsoid about the origin."""
    a, b, c = spec.a, spec.b, spec.c
    D = spec.normal_norm2(u, v)
    if np.any(D <= 1e-300):
        raise DegenerateSurface("ellipsoid normal vanishes")
    w = spec.factor(u, v) / D
    s = np.sin(v)
    return stack3(b * b * c * c * w * s * np.cos(u), a * b * c * c * w * s * np.sin(u), a * b * b * c * w * np.cos(v))


def ellipsoid_pedal_general(spec: EllipsoidSpec, r0, u, v) -> np.ndarray:
    """Pedal of the ellipsoid about an arbitrary point ``r0``."""
    a, b, c, k = spec.a, spec.b, spec.c, spec.k
    x0, y0, z0 = (float(q) for q in r0)
    s = np.sin(v)
    n = spec.normal_field(u, v)
    D = np.sum(n * n, axis=-1)
    w = b * c * (k - x0) * s * np.cos(u) + a * (-c * y0 * s * np.sin(u) - b * z0 * np.cos(v) + b * c)
    return (w / D)[..., None] * n + np.array([x0, y0, z0])
