"""File emitters: SVG and CSV for pedal curves, OBJ for pedal surfaces."""
from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET

import numpy as np

from .plane import EPS_DEN, ParamCurve2, PedalConfig2, _pedal_scale, cross2, pedal_jets
from .surface import ParamSurface3, PedalConfig3, pedal_surface_eval, second_form

MIN_RESOLUTION = 16


def curve_samples(curve: ParamCurve2, cfg: PedalConfig2, n: int = 1024):
    """Parameters, pedal points and the pedal's signed curvature ``kp``.

    The sign is taken along the traversal, so an inner loop shows up negative
    even where the functional (p' x p'') / (p x p') stays positive. Points where
    the pedal stalls (a cusp at the origin) get nan.
    """
    if n < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}")
    t = curve.grid(n)
    p, dp, ddp = pedal_jets(curve, cfg, t)
    speed = np.linalg.norm(dp, axis=-1)
    stall = speed * np.linalg.norm(p, axis=-1) <= EPS_DEN * _pedal_scale(curve, cfg)
    with np.errstate(divide="ignore", invalid="ignore"):
        kp = np.where(stall, np.nan, cross2(dp, ddp) / speed**3)
    return t, p, kp


def curve_csv(t, p, kp) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "x", "y", "kp"])
    for ti, (x, y), k in zip(t, p, kp):
        w.writerow([format(ti, ".17g"), format(x, ".17g"), format(y, ".17g"), format(k, ".17g")])
    return buf.getvalue()


def _fmt(x: float) -> str:
    return format(x, ".6g")


def curve_svg(p: np.ndarray, size: int = 512) -> str:
    """Closed polyline with axes and an origin marker, fitted to the bounding box plus 5%."""
    pts = np.vstack([p, np.zeros((1, 2))])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-12))
    pad = 0.05 * span
    x0, y0 = lo[0] - pad, -(hi[1] + pad)
    w, h = hi[0] - lo[0] + 2 * pad, hi[1] - lo[1] + 2 * pad
    stroke = _fmt(span / 400)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(size), height=str(size),
                     viewBox=" ".join(_fmt(v) for v in (x0, y0, w, h)))
    axes = ET.SubElement(svg, "g", stroke="#999999", **{"stroke-width": stroke})
    ET.SubElement(axes, "line", x1=_fmt(x0), y1="0", x2=_fmt(x0 + w), y2="0")
    ET.SubElement(axes, "line", x1="0", y1=_fmt(y0), x2="0", y2=_fmt(y0 + h))
    # svg y grows downwards, so flip
    closed = np.vstack([p, p[:1]])
    ET.SubElement(svg, "polyline", fill="none", stroke="#1f4e99", **{"stroke-width": _fmt(2 * span / 400)},
                  points=" ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in closed))
    ET.SubElement(svg, "circle", cx="0", cy="0", r=_fmt(span / 100), fill="#cc2222")
    return ET.tostring(svg, encoding="unicode") + "\n"


def surface_obj(s: ParamSurface3, cfg: PedalConfig3, nu: int, nv: int,
                normal_source: str = "cross_product", implicit_gradient=None) -> str:
    """Pedal mesh on the inset grid; each vertex carries a ``# det2 <sign>`` comment."""
    if min(nu, nv) < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}")
    U, V = s.grid(nu, nv)
    P = pedal_surface_eval(s, cfg, U, V)
    det2 = second_form(s, cfg, U, V, normal_source, implicit_gradient).det2
    sign = np.sign(det2).astype(int)
    out = [f"# pedal surface {nu}x{nv}\n"]
    for i in range(nu):
        for j in range(nv):
            x, y, z = P[i, j]
            out.append(f"v {x:.17g} {y:.17g} {z:.17g}\n# det2 {sign[i, j]:+d}\n")
    idx = lambda i, j: i * nv + j + 1
    iu = nu if s.periodic_u else nu - 1
    for i in range(iu):
        i1 = (i + 1) % nu
        for j in range(nv - 1):
            out.append(f"f {idx(i, j)} {idx(i1, j)} {idx(i1, j + 1)} {idx(i, j + 1)}\n")
    return "".join(out)
