"""One-parameter sweeps over a family and bisection for the convexity boundary."""
from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NoSignChange, PedalError, PreconditionViolated
from .families import get_family, run_engine
from .report import CONVEX, DEGENERATE, ConvexityReport

NEAR_FLIP = 1e-6


@dataclass(frozen=True)
class SweepSpec:
    family: str
    fixed: dict
    param: str
    lo: float
    hi: float
    steps: int = 16
    engine: str = "closed_form"
    seed: int = 0

    def __post_init__(self):
        if not (self.lo < self.hi):
            raise PreconditionViolated("sweep range must satisfy lo < hi")
        if self.steps < 8:
            raise PreconditionViolated("sweep resolution must be at least 8")
        fam = get_family(self.family)
        if self.param not in fam.params:
            raise PreconditionViolated(f"{fam.name} has no parameter {self.param!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)

    def params_at(self, x: float) -> dict:
        return {**self.fixed, self.param: float(x)}


@dataclass(frozen=True)
class SweepRow:
    param: float
    verdict: str
    margin: float
    engine: str
    error: Optional[str] = None


@dataclass(frozen=True)
class BoundaryResult:
    boundary_value: float
    bracket: tuple[float, float]
    agreement: dict = field(default_factory=dict)

    @property
    def engines_agree(self) -> bool:
        return all(self.agreement.values())


def worker_count() -> int:
    cap = os.environ.get("PEDALFINSLER_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def evaluate(family: str, params: dict, engine: str, seed: int = 0) -> ConvexityReport:
    rep = run_engine(family, params, engine, 1, seed)
    if abs(rep.margin) < NEAR_FLIP and engine != "closed_form":
        rep = run_engine(family, params, engine, 4, seed)
    return rep


def _row(spec: SweepSpec, x: float) -> SweepRow:
    try:
        rep = evaluate(spec.family, spec.params_at(x), spec.engine, spec.seed)
    except PedalError as exc:
        return SweepRow(float(x), DEGENERATE, float("nan"), spec.engine, str(exc))
    return SweepRow(float(x), rep.verdict, float(rep.margin), spec.engine)


def sweep(spec: SweepSpec, workers: Optional[int] = None) -> list[SweepRow]:
    xs = spec.values()
    workers = workers or worker_count()
    if workers == 1:
        return [_row(spec, x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda x: _row(spec, x), xs))


def _is_convex(spec: SweepSpec, x: float, engine: str) -> bool:
    try:
        return evaluate(spec.family, spec.params_at(x), engine, spec.seed).verdict == CONVEX
    except PedalError:
        return False


def find_boundary(spec: SweepSpec, tol: float = 1e-3, engines: Sequence[str] = ()) -> BoundaryResult:
    """Bisect the swept parameter between the range ends of ``spec``.

    The final bracket is then checked against every engine in ``engines``:
    each must call the two bracket ends the same way the bisection engine did.
    """
    lo, hi = float(spec.lo), float(spec.hi)
    vlo, vhi = _is_convex(spec, lo, spec.engine), _is_convex(spec, hi, spec.engine)
    if vlo == vhi:
        raise NoSignChange(f"{spec.family}: verdict is the same at {spec.param}={lo} and {hi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _is_convex(spec, mid, spec.engine) == vlo:
            lo = mid
        else:
            hi = mid
    agreement = {spec.engine: True}
    for eng in engines:
        if eng == spec.engine:
            continue
        agreement[eng] = (_is_convex(spec, lo, eng) == vlo) and (_is_convex(spec, hi, eng) == vhi)
    return BoundaryResult(0.5 * (lo + hi), (lo, hi), agreement)


def find_boundaries(spec: SweepSpec, tol: float = 1e-3, engines: Sequence[str] = ()) -> list[BoundaryResult]:
    """Every flip seen on the sweep grid, each refined by bisection."""
    rows = sweep(spec)
    out = []
    for r0, r1 in zip(rows, rows[1:]):
        if (r0.verdict == CONVEX) != (r1.verdict == CONVEX):
            sub = SweepSpec(spec.family, spec.fixed, spec.param, r0.param, r1.param,
                            max(spec.steps, 8), spec.engine, spec.seed)
            out.append(find_boundary(sub, tol, engines))
    return out


def to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["param", "verdict", "margin", "engine"])
    for r in rows:
        w.writerow([format(r.param, ".17g"), r.verdict, format(r.margin, ".17g"), r.engine])
    return buf.getvalue()
