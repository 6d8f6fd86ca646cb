"""Circles, ellipses and their pedals: closed forms, implicit equations, convexity predicates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionViolated
from .plane import ORIGIN2, PedalConfig2, ParamCurve2, stack2

ORIGIN_BALL = 1e-9


@dataclass(frozen=True)
class CircleSpec:
    """Circle (x - k)^2 + y^2 = a^2; its pedal about the origin is a limacon."""

    a: float
    k: float

    def __post_init__(self):
        if not self.a > 0 or not self.k >= 0:
            raise PreconditionViolated(f"circle needs a > 0 and k >= 0, got a={self.a}, k={self.k}")

    def curve(self) -> ParamCurve2:
        a, k = self.a, self.k
        return ParamCurve2(
            lambda t: stack2(k + a * np.cos(t), a * np.sin(t)),
            lambda t: stack2(-a * np.sin(t), a * np.cos(t)),
            lambda t: stack2(-a * np.cos(t), -a * np.sin(t)),
        )

    def pedal(self, t) -> np.ndarray:
        r = self.a + self.k * np.cos(t)
        return stack2(r * np.cos(t), r * np.sin(t))

    def convexity_ratio(self, t):
        """Exact ``(p' x p'') / (p x p')`` of the limacon in the circle's angle parameter."""
        a, k = self.a, self.k
        c = np.cos(t)
        return (a * a + 3 * a * k * c + 2 * k * k) / (a + k * c) ** 2

    def curvature_quotient(self, t):
        """The limacon quotient with denominator |c(t)|^2 = a^2 + 2ak cos t + k^2."""
        a, k = self.a, self.k
        c = np.cos(t)
        return (a * a + 3 * a * k * c + 2 * k * k) / (a * a + 2 * a * k * c + k * k)


@dataclass(frozen=True)
class EllipseSpec:
    """Ellipse x = k + a cos t, y = b sin t."""

    a: float
    b: float
    k: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.k > 0):
            raise PreconditionViolated("ellipse needs a, b, k > 0")

    def curve(self) -> ParamCurve2:
        a, b, k = self.a, self.b, self.k
        return ParamCurve2(
            lambda t: stack2(k + a * np.cos(t), b * np.sin(t)),
            lambda t: stack2(-a * np.sin(t), b * np.cos(t)),
            lambda t: stack2(-a * np.cos(t), -b * np.sin(t)),
        )

    def pedal(self, t) -> np.ndarray:
        a, b, k = self.a, self.b, self.k
        c, s = np.cos(t), np.sin(t)
        w = (k * c + a) / (a * a * s * s + b * b * c * c)
        return stack2(b * b * w * c, a * b * w * s)


@dataclass(frozen=True)
class OffsetPedalCircleSpec:
    """Unit circle with the pedal point moved to (a, 0)."""

    a: float

    def __post_init__(self):
        if not math.isfinite(self.a):
            raise PreconditionViolated("pedal abscissa must be finite")

    def curve(self) -> ParamCurve2:
        return CircleSpec(1.0, 0.0).curve()

    def config(self) -> PedalConfig2:
        return PedalConfig2((self.a, 0.0))

    def pedal(self, t) -> np.ndarray:
        r = 1.0 - self.a * np.cos(t)
        return stack2(r * np.cos(t) + self.a, r * np.sin(t))


def limacon_implicit(spec: CircleSpec, pt) -> np.ndarray:
    x, y = np.moveaxis(np.asarray(pt, dtype=float), -1, 0)
    rho2 = x * x + y * y
    return (rho2 - spec.k * x) ** 2 - spec.a**2 * rho2


def ellipse_pedal_implicit(spec: EllipseSpec, pt) -> np.ndarray:
    x, y = np.moveaxis(np.asarray(pt, dtype=float), -1, 0)
    return (x * x + y * y - spec.k * x) ** 2 - (spec.a**2 * x * x + spec.b**2 * y * y)


def on_locus(value, pt, scale: float = 1.0, tol: float = 1e-9) -> np.ndarray:
    """Membership from an implicit value; the origin, where the implicit forms vanish spuriously, is excluded."""
    r = np.linalg.norm(np.asarray(pt, dtype=float), axis=-1)
    return (np.abs(value) <= tol * scale) & (r > ORIGIN_BALL)


def limacon_convex(spec: CircleSpec) -> bool:
    return spec.a > 2 * spec.k


def offset_pedal_convex(spec: OffsetPedalCircleSpec) -> bool:
    return -0.5 < spec.a < 0.5


def ellipse_convex_bound(spec: EllipseSpec) -> float:
    """sqrt((3ak + a^2 - 2k^2) / 2), the lower bound b must exceed."""
    a, k = spec.a, spec.k
    return math.sqrt(max(3 * a * k + a * a - 2 * k * k, 0.0) / 2.0)


def ellipse_pedal_convex_sufficient(spec: EllipseSpec) -> bool:
    """Sufficient condition a > b > bound; ``False`` does not mean non-convex."""
    if spec.a <= spec.b:
        raise PreconditionViolated("the sufficient condition assumes a > b")
    return spec.b > ellipse_convex_bound(spec)
