"""Pedal surfaces of parametric patches and the Gauss-curvature sign test."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .errors import DegenerateSurface, MissingImplicitForm, PreconditionViolated
from .report import CONVEX, NOT_CONVEX, ConvexityReport

EPS_REG = 1e-9
FD_STEP = 1e-4
POLE_INSET = 1e-3

PatchFn = Callable[[np.ndarray, np.ndarray], np.ndarray]


def stack3(x, y, z):
    x, y, z = np.broadcast_arrays(x, y, z)
    return np.stack([x, y, z], axis=-1)


def dot(u, v):
    return np.sum(u * v, axis=-1)


@dataclass(frozen=True)
class ParamSurface3:
    """A parametric patch on ``[u0, u1] x [v0, v1]`` with analytic partials.

    Every callable takes broadcastable arrays ``u, v`` and returns an array
    with a trailing axis of length 3. When ``center`` is given, the normal is
    oriented to point away from it (checked at the middle of the domain).
    """

    eval: PatchFn
    du: PatchFn
    dv: PatchFn
    duu: PatchFn
    duv: PatchFn
    dvv: PatchFn
    domain: tuple[float, float, float, float] = (0.0, 2 * math.pi, 0.0, math.pi)
    periodic_u: bool = True
    inset: float = POLE_INSET
    center: Optional[tuple[float, float, float]] = None
    orientation: float = field(default=1.0, init=False)

    def __post_init__(self):
        if self.center is not None:
            u0, u1, v0, v1 = self.domain
            um, vm = np.array(0.5 * (u0 + u1)), np.array(0.5 * (v0 + v1))
            n = np.cross(self.du(um, vm), self.dv(um, vm))
            if dot(n, self.eval(um, vm) - np.asarray(self.center, dtype=float)) < 0:
                object.__setattr__(self, "orientation", -1.0)

    def grid(self, nu: int, nv: int):
        """Interior sample grid: periodic in u without the repeated seam, inset at the v ends."""
        u0, u1, v0, v1 = self.domain
        if self.periodic_u:
            u = u0 + (u1 - u0) * np.arange(nu) / nu
        else:
            u = np.linspace(u0 + self.inset, u1 - self.inset, nu)
        v = np.linspace(v0 + self.inset, v1 - self.inset, nv)
        return np.meshgrid(u, v, indexing="ij")


@dataclass(frozen=True)
class PedalConfig3:
    pedal_point: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        p = tuple(float(x) for x in self.pedal_point)
        if len(p) != 3 or not all(math.isfinite(x) for x in p):
            raise PreconditionViolated(f"pedal point must be three finite numbers, got {self.pedal_point!r}")
        object.__setattr__(self, "pedal_point", p)

    @property
    def r0(self) -> np.ndarray:
        return np.array(self.pedal_point)


ORIGIN3 = PedalConfig3()


@dataclass(frozen=True)
class SecondFormEntries:
    """Second-form entries against an un-normalised normal ``V``.

    ``gauss`` is the Gauss curvature recovered as det2 / (|V|^2 |p_u x p_v|^2);
    it has the sign of ``det2`` but stays well scaled where the
    parametrization degenerates.
    """

    L: np.ndarray
    M: np.ndarray
    N_entry: np.ndarray
    det2: np.ndarray
    gauss: np.ndarray


def surface_normal(s: ParamSurface3, u, v) -> np.ndarray:
    n = np.cross(s.du(u, v), s.dv(u, v))
    size = np.linalg.norm(n, axis=-1)
    if np.any(size <= EPS_REG):
        raise DegenerateSurface(f"|S_u x S_v| = {np.min(size):.3g} below {EPS_REG}")
    return s.orientation * n / size[..., None]


def pedal_surface_eval(s: ParamSurface3, cfg: PedalConfig3, u, v) -> np.ndarray:
    """Orthogonal projection of the pedal point onto the tangent plane at ``(u, v)``."""
    n = surface_normal(s, u, v)
    r0 = cfg.r0
    return dot(s.eval(u, v) - r0, n)[..., None] * n + r0


_W1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_W2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFF = np.arange(-2, 3)


def pedal_jets(s: ParamSurface3, cfg: PedalConfig3, u, v, h: float = FD_STEP):
    """Pedal position, first and second partials by five-point central differences."""
    u = np.asarray(u, dtype=float)[..., None, None]
    v = np.asarray(v, dtype=float)[..., None, None]
    du = _OFF[:, None] * h
    dv = _OFF[None, :] * h
    P = pedal_surface_eval(s, cfg, u + du, v + dv)  # (..., 5, 5, 3)
    pu_row = P[..., :, 2, :]
    pv_col = P[..., 2, :, :]
    p = P[..., 2, 2, :]
    pu = np.einsum("i,...ik->...k", _W1, pu_row) / h
    pv = np.einsum("j,...jk->...k", _W1, pv_col) / h
    puu = np.einsum("i,...ik->...k", _W2, pu_row) / (h * h)
    pvv = np.einsum("j,...jk->...k", _W2, pv_col) / (h * h)
    puv = np.einsum("i,j,...ijk->...k", _W1, _W1, P) / (h * h)
    return p, pu, pv, puu, puv, pvv


def second_form(s: ParamSurface3, cfg: PedalConfig3, u, v, normal_source: str = "cross_product",
                implicit_gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None,
                h: float = FD_STEP) -> SecondFormEntries:
    """Second fundamental form of the pedal patch against an un-normalised normal.

    ``normal_source`` is ``"cross_product"`` (p_u x p_v) or
    ``"implicit_gradient"`` (the gradient of the pedal locus' implicit
    equation, passed as ``implicit_gradient``). The sign of ``det2`` does not
    depend on the choice.
    """
    p, pu, pv, puu, puv, pvv = pedal_jets(s, cfg, u, v, h)
    W = np.cross(pu, pv)
    area2 = dot(W, W)
    if np.any(area2 <= EPS_REG**4):
        raise DegenerateSurface("pedal patch is singular (p_u x p_v vanishes)")
    if normal_source == "cross_product":
        V = W
    elif normal_source == "implicit_gradient":
        if implicit_gradient is None:
            raise MissingImplicitForm("no implicit form registered for this pedal locus")
        V = implicit_gradient(p)
    else:
        raise ValueError(f"unknown normal source {normal_source!r}")
    L, M, N = dot(puu, V), dot(puv, V), dot(pvv, V)
    det2 = L * N - M * M
    return SecondFormEntries(L, M, N, det2, det2 / (dot(V, V) * area2))


def is_strongly_convex_surface(s: ParamSurface3, cfg: PedalConfig3 = ORIGIN3, grid: tuple[int, int] = (128, 64),
                               normal_source: str = "cross_product", implicit_gradient=None,
                               refine: bool = True) -> ConvexityReport:
    """Sample ``det2`` on the inset grid; convex iff positive everywhere.

    The report's ``min_value`` is the smallest Gauss curvature, which carries
    the sign of ``det2``. The grid minimum is polished by a Nelder-Mead
    search around it, since near the boundary the negative region can be a
    thin ring between grid lines.
    """
    nu, nv = grid
    if nu < 32 or nv < 32:
        raise PreconditionViolated("surface grid must be at least 32 x 32")
    U, V = s.grid(nu, nv)
    det = second_form(s, cfg, U, V, normal_source, implicit_gradient).gauss
    scale = float(np.max(np.abs(det))) or 1.0
    idx = np.unravel_index(int(np.argmin(det)), det.shape)
    dmin, arg = float(det[idx]), (float(U[idx]), float(V[idx]))

    if refine and dmin > 0:
        dmin, arg = _refine(s, cfg, arg, dmin, normal_source, implicit_gradient, scale,
                            ((s.domain[1] - s.domain[0]) / nu, (s.domain[3] - s.domain[2]) / nv))

    verdict = CONVEX if dmin > 0 else NOT_CONVEX
    return ConvexityReport(verdict, dmin, arg, nu * nv, scale=scale, engine="surface_det2")


def _refine(s, cfg, start, dmin, normal_source, implicit_gradient, scale, steps):
    _, _, v0, v1 = s.domain
    lo, hi = v0 + s.inset, v1 - s.inset

    def f(x):
        vv = min(max(x[1], lo), hi)
        return float(second_form(s, cfg, np.array(x[0]), np.array(vv), normal_source, implicit_gradient).gauss) / scale

    x0 = np.array(start)
    simplex = np.array([x0, x0 + [steps[0], 0.0], x0 + [0.0, steps[1]]])
    res = optimize.minimize(f, x0, method="Nelder-Mead",
                            options={"initial_simplex": simplex, "xatol": 1e-9, "fatol": 1e-14, "maxiter": 400})
    if res.fun * scale < dmin:
        return float(res.fun * scale), (float(res.x[0]), float(min(max(res.x[1], lo), hi)))
    return dmin, start
