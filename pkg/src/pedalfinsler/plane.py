"""Pedal curves of closed plane curves and their convexity functionals."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import DegenerateCurve, DegenerateDenominator, PreconditionViolated
from .report import CONVEX, DEGENERATE, NOT_CONVEX, ConvexityReport

EPS_REG = 1e-9
EPS_DEN = 1e-10
EPS_ORIGIN = 1e-8
CLOSE_TOL = 1e-12
REFINE_BELOW = 1e-6
TWO_PI = 2.0 * math.pi

VecFn = Callable[[np.ndarray], np.ndarray]


def dot(u, v):
    return np.sum(np.asarray(u) * np.asarray(v), axis=-1)


def cross2(u, v):
    u = np.asarray(u)
    v = np.asarray(v)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def rot90(v):
    v = np.asarray(v)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def stack2(x, y):
    x, y = np.broadcast_arrays(x, y)
    return np.stack([x, y], axis=-1)


@dataclass(frozen=True)
class ParamCurve2:
    """A closed regular plane curve with analytic first and second derivatives.

    The three callables take an array of parameters and return arrays with a
    trailing axis of length 2. Clockwise curves are reparametrized backwards
    on construction so that the frame convention below always sees a
    counterclockwise curve (pass ``orient=False`` to keep it as given).
    """

    eval: VecFn
    d1: VecFn
    d2: VecFn
    period: float = TWO_PI
    orient: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        ends = np.array([0.0, self.period])
        c = self.eval(ends)
        dc = self.d1(ends)
        if np.max(np.abs(c[0] - c[1])) > CLOSE_TOL or np.max(np.abs(dc[0] - dc[1])) > CLOSE_TOL:
            raise PreconditionViolated("curve is not closed over its period")
        if self.orient and self.signed_area() < 0:
            ev, d1, d2 = self.eval, self.d1, self.d2
            object.__setattr__(self, "eval", lambda t: ev(-np.asarray(t, dtype=float)))
            object.__setattr__(self, "d1", lambda t: -d1(-np.asarray(t, dtype=float)))
            object.__setattr__(self, "d2", lambda t: d2(-np.asarray(t, dtype=float)))

    def signed_area(self, n: int = 1024) -> float:
        t = self.grid(n)
        return 0.5 * float(np.mean(cross2(self.eval(t), self.d1(t)))) * self.period

    def grid(self, n: int) -> np.ndarray:
        return self.period * np.arange(n) / n

    def reparametrized(self, speed: float) -> "ParamCurve2":
        """Same trace, traversed ``speed`` times faster over a shorter period."""
        ev, d1, d2 = self.eval, self.d1, self.d2
        s = float(speed)
        return ParamCurve2(
            lambda t: ev(s * np.asarray(t, dtype=float)),
            lambda t: s * d1(s * np.asarray(t, dtype=float)),
            lambda t: s * s * d2(s * np.asarray(t, dtype=float)),
            period=self.period / s,
        )


@dataclass(frozen=True)
class PedalConfig2:
    pedal_point: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        p = tuple(float(x) for x in self.pedal_point)
        if len(p) != 2 or not all(math.isfinite(x) for x in p):
            raise PreconditionViolated(f"pedal point must be two finite numbers, got {self.pedal_point!r}")
        object.__setattr__(self, "pedal_point", p)

    @property
    def r0(self) -> np.ndarray:
        return np.array(self.pedal_point)

    @property
    def at_origin(self) -> bool:
        return self.pedal_point == (0.0, 0.0)


ORIGIN2 = PedalConfig2()


@dataclass(frozen=True)
class FrenetData2:
    T: np.ndarray
    N: np.ndarray
    speed: np.ndarray
    kappa: np.ndarray


def frenet(curve: ParamCurve2, t) -> FrenetData2:
    """Unit tangent, left normal, speed and signed curvature at ``t``."""
    d1 = curve.d1(t)
    speed = np.linalg.norm(d1, axis=-1)
    if np.any(speed <= EPS_REG):
        raise DegenerateCurve(f"curve speed {np.min(speed):.3g} below {EPS_REG}")
    T = d1 / speed[..., None]
    N = rot90(T)
    kappa = dot(curve.d2(t), N) / speed**2
    return FrenetData2(T, N, speed, kappa)


def pedal_eval(curve: ParamCurve2, cfg: PedalConfig2, t) -> np.ndarray:
    """Foot of the perpendicular from the pedal point onto the tangent at ``t``."""
    fr = frenet(curve, t)
    r0 = cfg.r0
    return dot(curve.eval(t) - r0, fr.N)[..., None] * fr.N + r0


def pedal_d1(curve: ParamCurve2, cfg: PedalConfig2, t) -> np.ndarray:
    fr = frenet(curve, t)
    rel = cfg.r0 - curve.eval(t)
    m = (fr.kappa * fr.speed)[..., None]
    return m * (dot(rel, fr.T)[..., None] * fr.N + dot(rel, fr.N)[..., None] * fr.T)


def pedal_curvature_quotient(curve: ParamCurve2, cfg: PedalConfig2, t) -> np.ndarray:
    """Closed-form convexity quotient built from the base curve's Frenet data.

    Equals ``(p' x p'') / (p x p')`` divided by the squared base speed, so the
    two agree in sign wherever both are defined.
    """
    fr = frenet(curve, t)
    c = curve.eval(t)
    r0 = cfg.r0
    rel = r0 - c
    u = dot(rel, fr.T)
    w = dot(rel, fr.N)
    k = fr.kappa
    num = k * (-2.0 * k * u**2 + w - 2.0 * k * w**2)
    cN, cT = dot(c, fr.N), dot(c, fr.T)
    rN, rT = dot(r0, fr.N), dot(r0, fr.T)
    den = cN * rN + cT * rT - cN**2 - rT**2
    return num / den


def origin_pedal_sign_form(curve: ParamCurve2, t) -> np.ndarray:
    """``k_c (2 k_c |c|^2 + <c, N>)``; same sign as the functional when the pedal point is the origin."""
    fr = frenet(curve, t)
    c = curve.eval(t)
    return fr.kappa * (2.0 * fr.kappa * dot(c, c) + dot(c, fr.N))


# -- numeric derivatives of the pedal ------------------------------------

def _d5(f, t, h):
    fm2, fm1, fp1, fp2 = (f(t + s * h) for s in (-2.0, -1.0, 1.0, 2.0))
    f0 = f(t)
    d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h)
    d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)
    return f0, d1, d2


def pedal_jets(curve: ParamCurve2, cfg: PedalConfig2, t):
    """Pedal position with its first two derivatives.

    Five-point central differences at steps h and 2h, h = 1e-4 * period,
    combined by one Richardson step.
    """
    t = np.asarray(t, dtype=float)
    h = 1e-4 * curve.period
    f = lambda s: pedal_eval(curve, cfg, s)
    p, a1, a2 = _d5(f, t, h)
    _, b1, b2 = _d5(f, t, 2.0 * h)
    return p, (16.0 * a1 - b1) / 15.0, (16.0 * a2 - b2) / 15.0


def _pedal_scale(curve: ParamCurve2, cfg: PedalConfig2, n: int = 256) -> float:
    t = curve.grid(n)
    P = np.max(np.linalg.norm(pedal_eval(curve, cfg, t), axis=-1))
    V = np.max(np.linalg.norm(pedal_d1(curve, cfg, t), axis=-1))
    return float(P * V) if P * V > 0 else 1.0


def _functional(curve, cfg, t, scale):
    val, deg, _ = _functional_parts(curve, cfg, t, scale)
    return val, deg


def _functional_parts(curve, cfg, t, scale):
    p, dp, ddp = pedal_jets(curve, cfg, t)
    den = cross2(p, dp)
    degenerate = np.abs(den) <= EPS_DEN * scale
    with np.errstate(divide="ignore", invalid="ignore"):
        val = cross2(dp, ddp) / den
    return np.where(degenerate, np.nan, val), degenerate, (p, den)


def winding_number(points: np.ndarray) -> float:
    """Turns of a closed polyline (given without its repeated end point) about the origin."""
    ang = np.arctan2(points[..., 1], points[..., 0])
    step = np.diff(np.append(ang, ang[0]))
    step = (step + np.pi) % (2 * np.pi) - np.pi
    return float(np.sum(step) / (2 * np.pi))


def convexity_functional(curve: ParamCurve2, cfg: PedalConfig2, t, scale: Optional[float] = None):
    """``(p' x p'') / (p x p')`` of the pedal, evaluated numerically.

    Raises :class:`DegenerateDenominator` if ``p x p'`` vanishes (relative to
    the product of the pedal's largest radius and speed) at any requested
    parameter.
    """
    if scale is None:
        scale = _pedal_scale(curve, cfg)
    val, deg = _functional(curve, cfg, t, scale)
    if np.any(deg):
        bad = np.atleast_1d(np.asarray(t, dtype=float))[np.atleast_1d(deg)]
        raise DegenerateDenominator(f"p x p' vanishes at t={bad[0]:.6g}")
    return val


def is_strongly_convex(curve: ParamCurve2, cfg: PedalConfig2 = ORIGIN2, n_samples: int = 2048) -> ConvexityReport:
    if n_samples < 64:
        raise PreconditionViolated("n_samples must be at least 64")
    scale = _pedal_scale(curve, cfg)
    t = curve.grid(n_samples)
    val, deg, (p, den) = _functional_parts(curve, cfg, t, scale)
    ok = ~deg
    if not np.any(ok):
        return ConvexityReport(DEGENERATE, math.nan, None, n_samples, engine="curve_functional")
    vals = np.where(ok, val, np.inf)
    i = int(np.argmin(vals))
    vmin, tmin = float(vals[i]), float(t[i])
    vscale = float(np.max(np.abs(val[ok])))
    # p x p' must keep one sign and the pedal must wrap the origin exactly once
    signs = np.sign(den[ok])
    den_crosses = bool(np.any(signs != signs[0]))
    wraps_once = abs(round(winding_number(p))) == 1
    radial_ok = not (np.any(deg) or den_crosses or not wraps_once)

    if 0 < vmin < REFINE_BELOW and not deg[(i - 1) % n_samples] and not deg[(i + 1) % n_samples]:
        vmin, tmin = _refine(curve, cfg, scale, t[i], curve.period / n_samples, vmin, tmin)

    if vmin <= 0 and not den_crosses:
        verdict = NOT_CONVEX
    elif not radial_ok:
        verdict = DEGENERATE
    else:
        verdict = CONVEX
    return ConvexityReport(verdict, vmin, tmin, n_samples, scale=vscale or 1.0, engine="curve_functional")


def _refine(curve, cfg, scale, t0, step, vmin, tmin):
    def f(s):
        v, d = _functional(curve, cfg, np.array([s]), scale)
        return math.inf if d[0] else float(v[0])

    try:
        res = optimize.minimize_scalar(f, bracket=(t0 - step, t0, t0 + step), method="golden",
                                       options={"xtol": 1e-12})
    except ValueError:
        return vmin, tmin
    if res.fun < vmin:
        return float(res.fun), float(res.x % curve.period)
    return vmin, tmin


# -- passage of the pedal through the origin ------------------------------

@dataclass(frozen=True)
class OriginReport:
    """Whether the pedal passes through the origin.

    ``verdict`` comes from the exact condition <c, N> = 0 and <r0, T> = 0 at a
    common parameter; ``case`` and ``theorem_verdict`` record the three-case
    classification by whether the pedal point is the origin and whether the
    base curve passes through it. ``numeric_min`` is the dense-grid minimum
    of |p(t)| kept as a cross-check.
    """

    verdict: str
    case: str
    theorem_verdict: str
    t0: Optional[float]
    numeric_min: float


PASSES = "passes_origin"
AVOIDS = "avoids_origin"


def _grid_min(f, curve, n):
    t = curve.grid(n)
    vals = f(t)
    i = int(np.argmin(vals))
    step = curve.period / n
    res = optimize.minimize_scalar(lambda s: float(f(np.array([s]))[0]), bounds=(t[i] - step, t[i] + step),
                                   method="bounded", options={"xatol": 1e-15})
    if res.fun < vals[i]:
        return float(res.fun), float(res.x % curve.period)
    return float(vals[i]), float(t[i])


def origin_classification(curve: ParamCurve2, cfg: PedalConfig2, n: int = 4096) -> OriginReport:
    r0 = cfg.r0
    rnorm = float(np.linalg.norm(r0))
    t = curve.grid(n)
    size = float(np.max(np.linalg.norm(curve.eval(t), axis=-1))) or 1.0

    cmin, tc = _grid_min(lambda s: np.linalg.norm(curve.eval(s), axis=-1), curve, n)
    through = cmin <= EPS_ORIGIN * max(size, 1.0)

    def tangent_ortho(s):
        if rnorm == 0.0:
            return True
        return abs(float(dot(r0, frenet(curve, s).T))) <= 1e-9 * rnorm

    # parameters where the tangent line contains the origin
    candidates = [tc] if through else []
    g = dot(curve.eval(t), frenet(curve, t).N)
    gfun = lambda s: float(dot(curve.eval(s), frenet(curve, s).N))
    for i in np.nonzero(np.sign(g) != np.sign(np.roll(g, -1)))[0]:
        lo, hi = t[i], t[i] + curve.period / n
        root = optimize.brentq(gfun, lo, hi, xtol=1e-15) if g[i] != 0 else lo
        if through and np.linalg.norm(curve.eval(root)) <= 1e-6 * size:
            continue
        candidates.append(float(root % curve.period))

    hits = [s for s in candidates if tangent_ortho(s)]
    verdict = PASSES if hits else AVOIDS

    if rnorm == 0.0:
        case = "i"
        theorem = PASSES if through else AVOIDS
    elif through:
        case = "ii"
        theorem = PASSES if tangent_ortho(tc) else AVOIDS
    else:
        case = "iii"
        theorem = AVOIDS

    pmin, tp = _grid_min(lambda s: np.linalg.norm(pedal_eval(curve, cfg, s), axis=-1), curve, n)
    t0 = hits[0] if hits else (tc if through else None)
    return OriginReport(verdict, case, theorem, t0, pmin)
