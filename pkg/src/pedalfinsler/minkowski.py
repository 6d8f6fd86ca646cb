"""Minkowski norms whose indicatrices are pedal curves and surfaces.

Every norm is read off the implicit equation of its pedal locus (Okubo's
method) and evaluated with numpy ufuncs only, so it accepts ``float64`` as
well as ``longdouble`` input; the fundamental tensor is sampled in
``longdouble`` to keep the second differences clear of rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import FamilyMismatch, NumericalBreakdown, OutsideDomain, PreconditionViolated
from .linalg import jacobi_eigenvalues
from .report import CONVEX, DEGENERATE, NOT_CONVEX, ConvexityReport

EPS_DEN = 1e-10
EPS_PD = 1e-8
REL_STEP = 1e-5

SLOPE_TAGS = {2: "slope2", 3: "slope3"}
ELLIPSOID_TAGS = {2: "ellipse2", 3: "ellipsoid3"}


@dataclass(frozen=True)
class MinkowskiNorm:
    """A positively 1-homogeneous norm ``F`` on R^n with a positive-denominator cone.

    Use the constructors :func:`slope_norm`, :func:`ellipsoid_norm` and
    :func:`offset_circle_norm` rather than building one by hand.
    """

    family: str
    dim: int
    params: dict = field(hash=False)
    _denominator: Callable = field(repr=False, compare=False, hash=False)
    _eval: Callable = field(repr=False, compare=False, hash=False)

    def denominator(self, y) -> np.ndarray:
        return self._denominator(np.asarray(y))

    def domain(self, y) -> np.ndarray:
        y = np.asarray(y)
        return self.denominator(y) > EPS_DEN * np.sqrt(np.sum(y * y, axis=-1))

    def eval(self, y, check: bool = True) -> np.ndarray:
        y = np.asarray(y)
        if y.dtype.kind in "iu":
            y = y.astype(float)
        if y.shape[-1] != self.dim:
            raise ValueError(f"{self.family} expects vectors of length {self.dim}")
        if check and not np.all(self.domain(y)):
            raise OutsideDomain(f"{self.family}: denominator not positive at some y")
        return self._eval(y)

    __call__ = eval


def _alpha(y):
    return np.sqrt(np.sum(y * y, axis=-1))


def _radical_plus(rest2, lead2, root, ky1):
    """``root + ky1`` where ``root**2 = rest2 + lead2 * y1**2`` and ``ky1 = k * y1``.

    When ``ky1 < 0`` the sum cancels near the domain edge, so it is taken as
    (root^2 - ky1^2) / (root - ky1) with the numerator assembled term by term.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        stable = (rest2 + lead2) / (root - ky1)
    return np.where(ky1 >= 0, root + ky1, stable)


def slope_norm(dim: int, r: float, k: float) -> MinkowskiNorm:
    """F = |y|^2 / (r |y| + k y_1), whose indicatrix is the pedal of the sphere of radius r about (k, 0, ...)."""
    if dim < 2 or not r > 0 or k < 0:
        raise PreconditionViolated("slope norm needs dim >= 2, r > 0, k >= 0")
    def den(y):
        y1 = y[..., 0]
        rest2 = r * r * np.sum(y[..., 1:] ** 2, axis=-1)
        return _radical_plus(rest2, (r * r - k * k) * y1 * y1, r * _alpha(y), k * y1)

    return MinkowskiNorm(SLOPE_TAGS.get(dim, "slope_n"), dim, {"r": r, "k": k},
                         den, lambda y: np.sum(y * y, axis=-1) / den(y))


def ellipsoid_norm(axes, k: float) -> MinkowskiNorm:
    """F = |y|^2 / (sqrt(sum a_i^2 y_i^2) + k y_1) for the pedal of an ellipsoid with semi-axes ``axes``."""
    axes = tuple(float(a) for a in axes)
    if len(axes) < 2 or min(axes) <= 0 or k < 0:
        raise PreconditionViolated("ellipsoid norm needs >= 2 positive semi-axes and k >= 0")
    a2 = np.array(axes) ** 2

    def den(y):
        a2y = a2.astype(y.dtype)
        y1 = y[..., 0]
        rest2 = np.sum(a2y[1:] * y[..., 1:] ** 2, axis=-1)
        return _radical_plus(rest2, (a2y[0] - k * k) * y1 * y1, np.sqrt(np.sum(a2y * y * y, axis=-1)), k * y1)

    return MinkowskiNorm(ELLIPSOID_TAGS.get(len(axes), "ellipsoid_n"), len(axes), {"axes": axes, "k": k},
                         den, lambda y: np.sum(y * y, axis=-1) / den(y))


def offset_circle_norm(a: float, iterations: int = 90) -> MinkowskiNorm:
    """Norm whose indicatrix is the pedal of the unit circle about (a, 0).

    A point p lies on that pedal iff q = p - (a, 0) satisfies
    |q|^2 + <r0, q> = |q|. Along the ray p = rho * y/|y| this becomes
    rho^2 - rho*b = sqrt(rho^2 - 2 rho*b + a^2) with b = a*y_1/|y|; the root
    is bracketed by [0, 1 + 2|a|] and found by vectorised bisection, and
    F(y) = |y| / rho.
    """
    if not abs(a) < 1:
        raise PreconditionViolated("offset pedal norm needs |a| < 1 so the pedal point lies inside the circle")

    def radial(yhat):
        b = a * yhat[..., 0]
        lo = np.zeros_like(b)
        hi = np.full_like(b, 1 + 2 * abs(a))
        for _ in range(iterations):
            mid = 0.5 * (lo + hi)
            g = mid * mid - mid * b - np.sqrt(mid * mid - 2 * mid * b + a * a)
            neg = g < 0
            lo = np.where(neg, mid, lo)
            hi = np.where(neg, hi, mid)
        return 0.5 * (lo + hi)

    def ev(y):
        al = _alpha(y)
        return al / radial(y / al[..., None])

    def den(y):
        # |y|^2 / F = |y| * rho, positive for every y != 0
        al = _alpha(y)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(al > 0, al * radial(y / np.where(al > 0, al, 1)[..., None]), 0.0)

    return MinkowskiNorm("offset_circle2", 2, {"a": a}, den, ev)


# -- fundamental tensor -------------------------------------------------------

@dataclass(frozen=True)
class FundamentalTensor:
    g: np.ndarray
    base_y: np.ndarray


def fundamental_tensor(norm: MinkowskiNorm, y, rel_step: float = REL_STEP) -> FundamentalTensor:
    """g_ij = 1/2 d^2 F^2 / dy_i dy_j by central differences with step rel_step * |y|."""
    y = np.asarray(y, dtype=float)
    n = norm.dim
    size = float(np.linalg.norm(y))
    if size == 0.0:
        raise PreconditionViolated("fundamental tensor needs y != 0")
    h = rel_step * size
    E = np.eye(n) * h
    pts = [y]
    for i in range(n):
        pts += [y + E[i], y - E[i]]
    for i in range(n):
        for j in range(i + 1, n):
            pts += [y + E[i] + E[j], y + E[i] - E[j], y - E[i] + E[j], y - E[i] - E[j]]
    P = np.array(pts).astype(np.longdouble)
    if not np.all(norm.domain(P)):
        raise OutsideDomain(f"{norm.family}: stencil around y leaves the domain")
    F2 = norm.eval(P, check=False) ** 2
    hl = np.longdouble(h)
    H = np.empty((n, n), dtype=np.longdouble)
    for i in range(n):
        H[i, i] = (F2[1 + 2 * i] - 2 * F2[0] + F2[2 + 2 * i]) / (hl * hl)
    m = 1 + 2 * n
    for i in range(n):
        for j in range(i + 1, n):
            pp, pm, mp, mm = F2[m:m + 4]
            H[i, j] = H[j, i] = (pp - pm - mp + mm) / (4 * hl * hl)
            m += 4
    g = 0.5 * np.asarray(H, dtype=float)
    if not np.all(np.isfinite(g)):
        raise NumericalBreakdown(f"{norm.family}: non-finite fundamental tensor at y={y}")
    return FundamentalTensor(0.5 * (g + g.T), y)


def is_pd(t: FundamentalTensor) -> tuple[bool, float]:
    """Positive definiteness via Jacobi eigenvalues; threshold EPS_PD times the mean eigenvalue."""
    eig = jacobi_eigenvalues(t.g)
    lam = float(eig[0])
    scale = abs(float(np.trace(t.g))) / t.g.shape[0]
    return lam > EPS_PD * scale, lam


def _relative_min_eig(norm, y):
    t = fundamental_tensor(norm, y)
    ok, lam = is_pd(t)
    scale = abs(float(np.trace(t.g))) / norm.dim or 1.0
    return lam / scale


def sample_directions(dim: int, n: int, seed: int = 0) -> np.ndarray:
    """Angle grid in 2D, Fibonacci sphere in 3D, normalised Gaussians above."""
    if dim == 2:
        th = 2 * math.pi * np.arange(n) / n
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    if dim == 3:
        i = np.arange(n) + 0.5
        z = 1 - 2 * i / n
        phi = math.pi * (3 - math.sqrt(5)) * i
        rho = np.sqrt(1 - z * z)
        return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=-1)
    g = np.random.default_rng(seed).standard_normal((n, dim))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def norm_convexity_scan(norm: MinkowskiNorm, n_dirs: int = 256, seed: int = 0, refine: bool = True) -> ConvexityReport:
    """Check positive definiteness of g over the sphere of directions.

    Directions outside the domain cone make the verdict ``degenerate`` (the
    norm is not defined there) unless a sampled direction already fails.
    The worst sampled direction is then polished by a Nelder-Mead descent on
    the sphere, which catches failure regions thinner than the sampling.
    """
    if n_dirs < 64:
        raise PreconditionViolated("n_dirs must be at least 64")
    dirs = sample_directions(norm.dim, n_dirs, seed)
    inside = norm.domain(dirs)
    den_scale = float(np.max(norm.denominator(dirs)))
    if not np.any(inside):
        return ConvexityReport(DEGENERATE, math.nan, None, n_dirs, engine="hessian_scan")
    vals = np.full(n_dirs, np.inf)
    for i in np.nonzero(inside)[0]:
        try:
            vals[i] = _relative_min_eig(norm, dirs[i])
        except OutsideDomain:
            inside[i] = False
    i = int(np.argmin(vals))
    worst, wdir = float(vals[i]), dirs[i]

    if refine and worst > EPS_PD:
        worst, wdir = _refine_direction(norm, wdir, worst, n_dirs, den_scale)

    if worst <= EPS_PD:
        verdict = NOT_CONVEX
    elif not np.all(inside):
        verdict = DEGENERATE
    else:
        verdict = CONVEX
    return ConvexityReport(verdict, worst, tuple(float(x) for x in wdir), n_dirs, engine="hessian_scan")


def _refine_direction(norm, start, worst, n_dirs, den_scale):
    def f(z):
        nz = np.linalg.norm(z)
        if nz == 0:
            return math.inf
        y = z / nz
        # keep the stencil clear of the domain edge, where F^2 blows up
        if not norm.denominator(y) > 1e-2 * den_scale:
            return math.inf
        try:
            return _relative_min_eig(norm, y)
        except OutsideDomain:
            return math.inf

    step = min(0.5, 4.0 * n_dirs ** (-1.0 / (norm.dim - 1)))
    x0 = np.asarray(start, dtype=float)
    simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(norm.dim)])
    with np.errstate(invalid="ignore"):
        res = optimize.minimize(f, x0, method="Nelder-Mead",
                                options={"initial_simplex": simplex, "xatol": 1e-8, "fatol": 1e-12,
                                         "maxiter": 100 * norm.dim})
    if res.fun < worst:
        return float(res.fun), res.x / np.linalg.norm(res.x)
    return worst, np.asarray(start, dtype=float)


# -- indicatrix consistency ----------------------------------------------------

@dataclass(frozen=True)
class PedalSampler:
    """Points of a pedal locus tagged with the norm family they should satisfy."""

    family: str
    sample: Callable[[int, int], np.ndarray]


def indicatrix_consistency(norm: MinkowskiNorm, sampler: PedalSampler, n: int = 1024, seed: int = 0) -> float:
    """Largest |F(p) - 1| over ``n`` pedal points."""
    if sampler.family != norm.family:
        raise FamilyMismatch(f"sampler for {sampler.family} cannot check a {norm.family} norm")
    pts = sampler.sample(n, seed)
    return float(np.max(np.abs(norm.eval(pts) - 1.0)))
