"""Command-line front end: draw pedal curves and surfaces, check convexity, sweep parameters."""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from . import render
from .errors import EngineUnavailable, PedalError
from .families import ENGINES, FAMILIES, curve_of, get_family, norm_of, run_engine, surface_of
from .minkowski import fundamental_tensor, is_pd
from .report import CONVEX, INCONCLUSIVE
from .sweep import SweepSpec, find_boundaries, sweep, to_csv

EXIT_OK, EXIT_NOT_CONVEX, EXIT_USAGE, EXIT_IO, EXIT_DISAGREE = 0, 1, 2, 3, 4

PARAM_FLAGS = ("a", "b", "c", "k", "r")


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, help=f"one of {', '.join(FAMILIES)} (or slope2, slope3, ...)")
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--n", type=int, help="dimension for slope_n")
    p.add_argument("--axes", type=float, nargs="+", help="semi-axes for ellipsoid_n")
    p.add_argument("--pedal", type=float, nargs="+", help="pedal point coordinates (default: origin)")


def _params(args) -> dict:
    out = {name: getattr(args, name) for name in PARAM_FLAGS + ("n", "axes", "pedal")}
    return {k: v for k, v in out.items() if v is not None}


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _fmt(x) -> str:
    if x is None:
        return "-"
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    return ",".join(format(v, ".17g") for v in arr)


def cmd_curve(args) -> int:
    _, curve, cfg = curve_of(args.family, _params(args))
    t, p, kp = render.curve_samples(curve, cfg, args.samples)
    if not args.out and not args.csv:
        raise PedalError("give --out (svg) and/or --csv")
    if args.out:
        _write(args.out, render.curve_svg(p))
    if args.csv:
        _write(args.csv, render.curve_csv(t, p, kp))
    return EXIT_OK


def cmd_surface(args) -> int:
    _, surf, cfg, grad = surface_of(args.family, _params(args))
    source = "implicit_gradient" if grad is not None else "cross_product"
    _write(args.out, render.surface_obj(surf, cfg, args.nu, args.nv, source, grad))
    return EXIT_OK


def cmd_check(args) -> int:
    fam = get_family(args.family)
    params = _params(args)
    engines = fam.engines if args.engine == "all" else (args.engine or fam.engines[0],)
    convex = []
    for eng in engines:
        try:
            rep = run_engine(fam.name, params, eng, seed=args.seed)
        except EngineUnavailable as exc:
            if args.engine != "all":
                raise
            print(f"{eng}: unavailable ({exc})")
            continue
        print(f"{eng}: {rep.verdict} margin={_fmt(rep.margin)} argmin={_fmt(rep.argmin)}")
        if rep.verdict != INCONCLUSIVE:
            convex.append(rep.verdict == CONVEX)
    if not convex:
        return EXIT_NOT_CONVEX
    if len(set(convex)) > 1:
        print("engines disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK if convex[0] else EXIT_NOT_CONVEX


def cmd_sweep(args) -> int:
    params = _params(args)
    params.pop(args.param, None)
    fam = get_family(args.family)
    spec = SweepSpec(fam.name, params, args.param, args.lo, args.hi, args.steps,
                     args.engine or fam.engines[0], args.seed)
    text = to_csv(sweep(spec))
    lines = []
    if args.boundary:
        for b in find_boundaries(spec, args.tol, fam.engines):
            agree = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in b.agreement.items())
            lines.append(f"boundary {args.param}={b.boundary_value:.17g} "
                         f"bracket=[{b.bracket[0]:.17g},{b.bracket[1]:.17g}] {agree}")
    if args.out:
        _write(args.out, text)
        for line in lines:
            print(line)
    else:
        sys.stdout.write(text)
        for line in lines:
            print(line, file=sys.stderr)
    return EXIT_OK


def cmd_norm(args) -> int:
    norm = norm_of(args.family, _params(args))
    y = np.asarray(args.y, dtype=float)
    F = float(norm.eval(y))
    ok, lam = is_pd(fundamental_tensor(norm, y))
    print(f"F={F:.17g} min_eig_g={lam:.17g} positive_definite={'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_NOT_CONVEX


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pedalfinsler",
                                 description="Pedal curves and surfaces of conics and quadrics as Minkowski indicatrices.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="pedal curve as SVG and/or CSV")
    _family_args(p)
    p.add_argument("--out", help="SVG output path")
    p.add_argument("--csv", help="CSV output path (t,x,y,kp)")
    p.add_argument("--samples", type=int, default=1024)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("surface", help="pedal surface as an OBJ mesh")
    _family_args(p)
    p.add_argument("--out", required=True, help="OBJ output path")
    p.add_argument("--nu", type=int, default=128)
    p.add_argument("--nv", type=int, default=64)
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("check", help="convexity verdict; exit 0 convex, 1 not")
    _family_args(p)
    p.add_argument("--engine", choices=ENGINES + ("all",))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", help="verdict table over one parameter, as CSV")
    _family_args(p)
    p.add_argument("--param", required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--engine", choices=ENGINES)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.add_argument("--boundary", action="store_true", help="also bisect every flip and report it")
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("norm", help="evaluate F(y) and the smallest eigenvalue of g_y")
    _family_args(p)
    p.add_argument("--y", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_norm)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (PedalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
