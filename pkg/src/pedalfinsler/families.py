"""Named pedal families and the four verdict engines that can judge them.

A family turns a flat parameter dict (as typed on the command line) into
whatever each engine needs: a plane curve, a surface patch, a Minkowski
norm, or the closed-form parameter condition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import curves, surfaces
from .errors import EngineUnavailable, PreconditionViolated
from .minkowski import (MinkowskiNorm, PedalSampler, ellipsoid_norm, norm_convexity_scan,
                        offset_circle_norm, slope_norm)
from .plane import PedalConfig2, is_strongly_convex
from .report import CONVEX, INCONCLUSIVE, NOT_CONVEX, ConvexityReport
from .surface import PedalConfig3, is_strongly_convex_surface

ENGINES = ("curve_functional", "surface_det2", "hessian_scan", "closed_form")

ALIASES = {
    "slope2": "limacon",
    "offset_circle2": "offset_circle",
    "ellipse2": "ellipse",
    "slope3": "sphere",
    "ellipsoid3": "ellipsoid",
}


@dataclass(frozen=True)
class Family:
    name: str
    params: tuple[str, ...]
    engines: tuple[str, ...]
    norm_tag: str
    description: str


FAMILIES = {
    f.name: f
    for f in (
        Family("limacon", ("a", "k"), ENGINES[:1] + ENGINES[2:], "slope2",
               "pedal of the circle (x-k)^2+y^2=a^2 about the origin"),
        Family("offset_circle", ("a",), ENGINES[:1] + ENGINES[2:], "offset_circle2",
               "pedal of the unit circle about (a, 0)"),
        Family("ellipse", ("a", "b", "k"), ENGINES[:1] + ENGINES[2:], "ellipse2",
               "pedal of the ellipse x=k+a cos t, y=b sin t about the origin"),
        Family("sphere", ("r", "k"), ENGINES[1:], "slope3",
               "pedal of the sphere of radius r centred at (k,0,0) about the origin"),
        Family("ellipsoid", ("a", "b", "c", "k"), ENGINES[1:3], "ellipsoid3",
               "pedal of the ellipsoid with semi-axes a,b,c centred at (k,0,0)"),
        Family("slope_n", ("n", "r", "k"), ENGINES[2:], "slope_n",
               "pedal of the (n-1)-sphere of radius r centred at (k,0,...,0)"),
        Family("ellipsoid_n", ("axes", "k"), ENGINES[2:3], "ellipsoid_n",
               "pedal of the n-ellipsoid with the given semi-axes centred at (k,0,...,0)"),
    )
}


def get_family(name: str) -> Family:
    name = ALIASES.get(name, name)
    try:
        return FAMILIES[name]
    except KeyError:
        raise PreconditionViolated(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None


def _require(fam: Family, params: dict) -> dict:
    missing = [p for p in fam.params if params.get(p) is None]
    if missing:
        raise PreconditionViolated(f"family {fam.name} needs parameter(s): {', '.join(missing)}")
    return params


def _pedal(params: dict, dim: int):
    p = params.get("pedal")
    if p is None:
        return None
    p = tuple(float(x) for x in p)
    if len(p) != dim:
        raise PreconditionViolated(f"pedal point needs {dim} coordinates")
    return None if not any(p) else p


# -- objects per engine --------------------------------------------------------

def curve_of(name: str, params: dict):
    fam = get_family(name)
    _require(fam, params)
    if fam.name == "limacon":
        spec = curves.CircleSpec(params["a"], params["k"])
    elif fam.name == "ellipse":
        spec = curves.EllipseSpec(params["a"], params["b"], params["k"])
    elif fam.name == "offset_circle":
        spec = curves.OffsetPedalCircleSpec(params["a"])
        return spec, spec.curve(), spec.config()
    else:
        raise EngineUnavailable(f"{fam.name} is not a plane-curve family")
    pedal = _pedal(params, 2)
    return spec, spec.curve(), PedalConfig2(pedal or (0.0, 0.0))


def surface_of(name: str, params: dict):
    """(spec, patch, config, implicit gradient or None)."""
    fam = get_family(name)
    _require(fam, params)
    if fam.name == "sphere":
        spec = surfaces.SphereSpec(params["r"], params["k"])
        grad = lambda p: surfaces.limacon_surface_gradient(spec, p)
    elif fam.name == "ellipsoid":
        spec = surfaces.EllipsoidSpec(params["a"], params["b"], params["c"], params["k"])
        grad = lambda p: surfaces.ellipsoid_pedal_gradient(spec, p)
    else:
        raise EngineUnavailable(f"{fam.name} is not a surface family")
    pedal = _pedal(params, 3)
    # the implicit equations describe the locus about the origin only
    return spec, spec.surface(), PedalConfig3(pedal or (0.0, 0.0, 0.0)), (None if pedal else grad)


def norm_of(name: str, params: dict) -> MinkowskiNorm:
    fam = get_family(name)
    _require(fam, params)
    if params.get("pedal") is not None and any(params["pedal"]):
        raise EngineUnavailable("the norm is defined for the origin as pedal point only")
    if fam.name == "limacon":
        return slope_norm(2, params["a"], params["k"])
    if fam.name == "sphere":
        return slope_norm(3, params["r"], params["k"])
    if fam.name == "slope_n":
        return slope_norm(int(params["n"]), params["r"], params["k"])
    if fam.name == "ellipse":
        return ellipsoid_norm((params["a"], params["b"]), params["k"])
    if fam.name == "ellipsoid":
        return ellipsoid_norm((params["a"], params["b"], params["c"]), params["k"])
    if fam.name == "ellipsoid_n":
        return ellipsoid_norm(params["axes"], params["k"])
    return offset_circle_norm(params["a"])


def closed_form(name: str, params: dict) -> ConvexityReport:
    """The parameter condition for the family as a report.

    The ellipse condition is only sufficient, so when it fails the verdict
    is ``inconclusive``. No condition is available for ellipsoids.
    """
    fam = get_family(name)
    _require(fam, params)
    if params.get("pedal") is not None and any(params["pedal"]):
        raise EngineUnavailable("closed-form conditions assume the origin as pedal point")
    if fam.name == "limacon":
        spec = curves.CircleSpec(params["a"], params["k"])
        ok, margin, scale = curves.limacon_convex(spec), spec.a - 2 * spec.k, spec.a
    elif fam.name == "offset_circle":
        spec = curves.OffsetPedalCircleSpec(params["a"])
        ok, margin, scale = curves.offset_pedal_convex(spec), 0.5 - abs(spec.a), 0.5
    elif fam.name == "ellipse":
        spec = curves.EllipseSpec(params["a"], params["b"], params["k"])
        margin, scale = spec.b - curves.ellipse_convex_bound(spec), spec.b
        if spec.a <= spec.b or not curves.ellipse_pedal_convex_sufficient(spec):
            return ConvexityReport(INCONCLUSIVE, margin, None, 1, scale, "closed_form")
        ok = True
    elif fam.name in ("sphere", "slope_n"):
        r, k = params["r"], params["k"]
        ok, margin, scale = r > 2 * k, r - 2 * k, r
    else:
        raise EngineUnavailable(f"no closed-form convexity condition for {fam.name}")
    return ConvexityReport(CONVEX if ok else NOT_CONVEX, margin, None, 1, scale, "closed_form")


def run_engine(name: str, params: dict, engine: str, density: int = 1, seed: int = 0) -> ConvexityReport:
    """Run one verdict engine; ``density`` multiplies the sample count."""
    fam = get_family(name)
    if engine not in fam.engines:
        raise EngineUnavailable(f"engine {engine} does not apply to {fam.name}")
    if engine == "curve_functional":
        _, curve, cfg = curve_of(name, params)
        return is_strongly_convex(curve, cfg, 2048 * density)
    if engine == "surface_det2":
        _, surf, cfg, grad = surface_of(name, params)
        side = int(round(math.sqrt(density)))
        source = "implicit_gradient" if grad is not None else "cross_product"
        return is_strongly_convex_surface(surf, cfg, (128 * side, 64 * side), source, grad)
    if engine == "hessian_scan":
        return norm_convexity_scan(norm_of(name, params), 256 * density, seed)
    return closed_form(name, params)


# -- pedal samplers for indicatrix checks -------------------------------------

def _uv(n, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(0, 2 * math.pi, n), rng.uniform(1e-3, math.pi - 1e-3, n)


def ellipsoid_pedal_points(axes, k: float, n: int, seed: int = 0) -> np.ndarray:
    """Pedal about the origin of the n-ellipsoid k e_1 + diag(axes) w, |w| = 1."""
    axes = np.asarray(axes, dtype=float)
    w = np.random.default_rng(seed).standard_normal((n, axes.size))
    w /= np.linalg.norm(w, axis=-1, keepdims=True)
    c = axes * w
    c[:, 0] += k
    nrm = w / axes
    return (np.sum(c * nrm, axis=-1) / np.sum(nrm * nrm, axis=-1))[:, None] * nrm


def sampler_of(name: str, params: dict) -> PedalSampler:
    fam = get_family(name)
    _require(fam, params)
    tag = norm_of(name, params).family
    if fam.name in ("limacon", "ellipse", "offset_circle"):
        spec, _, _ = curve_of(name, {**params, "pedal": None})
        fn = lambda n, seed: spec.pedal(np.random.default_rng(seed).uniform(0, 2 * math.pi, n))
    elif fam.name == "sphere":
        spec = surfaces.SphereSpec(params["r"], params["k"])
        fn = lambda n, seed: spec.pedal(*_uv(n, seed))
    elif fam.name == "ellipsoid":
        spec = surfaces.EllipsoidSpec(params["a"], params["b"], params["c"], params["k"])
        fn = lambda n, seed: surfaces.ellipsoid_pedal_closed_form(spec, *_uv(n, seed))
    elif fam.name == "slope_n":
        axes = [params["r"]] * int(params["n"])
        fn = lambda n, seed: ellipsoid_pedal_points(axes, params["k"], n, seed)
    else:
        fn = lambda n, seed: ellipsoid_pedal_points(params["axes"], params["k"], n, seed)
    return PedalSampler(tag, fn)
