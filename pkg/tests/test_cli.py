from __future__ import annotations

import csv
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from pedalfinsler.cli import main

SQRT6 = "2.449489742783178"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# -- curve -------------------------------------------------------------------

def test_curve_svg_and_csv(tmp_path, capsys):
    svg, table = tmp_path / "fig1L.svg", tmp_path / "fig1L.csv"
    code, _, _ = run(capsys, "curve", "--family", "limacon", "--a", "3", "--k", "1", "--out", str(svg), "--csv", str(table))
    assert code == 0
    root = ET.parse(svg).getroot()
    assert root.tag.endswith("svg")
    poly = [e for e in root.iter() if e.tag.endswith("polyline")]
    assert len(poly) == 1 and len(poly[0].get("points").split()) == 1025
    assert any(e.tag.endswith("circle") for e in root.iter())
    rows = read_csv(table)
    assert list(rows[0]) == ["t", "x", "y", "kp"] and len(rows) == 1024
    assert open(table, "rb").read().count(b"\r") == 0


def test_svg_viewbox_contains_origin(tmp_path, capsys):
    svg = tmp_path / "off.svg"
    run(capsys, "curve", "--family", "offset_circle", "--a", "0.3", "--out", str(svg))
    x, y, w, h = map(float, ET.parse(svg).getroot().get("viewBox").split())
    assert x < 0 < x + w and y < 0 < y + h


@pytest.mark.parametrize("a,convex", [("3", True), ("1", False), ("2.5", True), ("1.9", False)])
def test_kp_positive_exactly_when_convex(tmp_path, capsys, a, convex):
    table = tmp_path / "c.csv"
    run(capsys, "curve", "--family", "limacon", "--a", a, "--k", "1", "--csv", str(table))
    kp = np.array([float(r["kp"]) for r in read_csv(table)])
    assert bool(np.all(kp > 0)) is convex
    code, _, _ = run(capsys, "check", "--family", "limacon", "--a", a, "--k", "1")
    assert (code == 0) is convex


def test_curve_rejects_surface_family(capsys, tmp_path):
    code, _, err = run(capsys, "curve", "--family", "sphere", "--r", "1", "--k", "0.3", "--out", str(tmp_path / "x.svg"))
    assert code == 2 and "error" in err


def test_curve_needs_output(capsys):
    assert run(capsys, "curve", "--family", "limacon", "--a", "3", "--k", "1")[0] == 2


def test_low_resolution_rejected(capsys, tmp_path):
    assert run(capsys, "curve", "--family", "limacon", "--a", "3", "--k", "1", "--samples", "8",
               "--out", str(tmp_path / "x.svg"))[0] == 2


def test_write_failure(capsys, tmp_path):
    code, _, _ = run(capsys, "curve", "--family", "limacon", "--a", "3", "--k", "1", "--out", str(tmp_path / "no" / "x.svg"))
    assert code == 3


def test_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for p in (a, b):
        run(capsys, "curve", "--family", "ellipse", "--a", "10", "--b", "9", "--k", "2", "--out", str(p))
    assert a.read_bytes() == b.read_bytes()


# -- surface -----------------------------------------------------------------

def read_obj(path):
    verts, faces, signs = [], [], []
    for line in open(path):
        if line.startswith("v "):
            verts.append([float(x) for x in line.split()[1:]])
        elif line.startswith("f "):
            faces.append([int(x) for x in line.split()[1:]])
        elif line.startswith("# det2"):
            signs.append(int(line.split()[2]))
    return np.array(verts), np.array(faces), np.array(signs)


def test_sphere_obj_all_positive(tmp_path, capsys):
    obj = tmp_path / "fig3.obj"
    code, _, _ = run(capsys, "surface", "--family", "sphere", "--r", "1", "--k", "0.3333333333333333", "--out", str(obj))
    assert code == 0
    v, f, s = read_obj(obj)
    assert len(v) == 128 * 64 and len(s) == len(v)
    assert np.all(s == 1)
    assert f.min() >= 1 and f.max() <= len(v) and f.shape == (128 * 63, 4)


def test_ellipsoid_obj_mixed_signs(tmp_path, capsys):
    obj = tmp_path / "fig4.obj"
    run(capsys, "surface", "--family", "ellipsoid", "--a", "2", "--b", "2", "--c", "4", "--k", "0.3333333333333333",
        "--nu", "64", "--nv", "32", "--out", str(obj))
    v, f, s = read_obj(obj)
    assert len(v) == 64 * 32
    assert (s == 1).any() and (s == -1).any()


def test_obj_mesh_is_closed_in_u(tmp_path, capsys):
    obj = tmp_path / "m.obj"
    run(capsys, "surface", "--family", "sphere", "--r", "1", "--k", "0.2", "--nu", "16", "--nv", "16", "--out", str(obj))
    _, f, _ = read_obj(obj)
    edges = {}
    for quad in f:
        for i in range(4):
            e = tuple(sorted((quad[i], quad[(i + 1) % 4])))
            edges[e] = edges.get(e, 0) + 1
    boundary = [e for e, n in edges.items() if n == 1]
    # only the two pole rings stay open
    assert len(boundary) == 2 * 16


# -- check ---------------------------------------------------------------------

def test_check_all_engines_convex(capsys):
    code, out, _ = run(capsys, "check", "--family", "limacon", "--a", "3", "--k", "1", "--engine", "all")
    assert code == 0
    assert out.count("convex") == 3 and "not_convex" not in out


def test_check_slope_n_not_convex(capsys):
    code, out, _ = run(capsys, "check", "--family", "slope_n", "--n", "5", "--r", "1", "--k", "0.6")
    assert code == 1 and "not_convex" in out


def test_check_ellipsoid_figure(capsys):
    code, out, _ = run(capsys, "check", "--family", "ellipsoid", "--a", "2", "--b", "2", "--c", SQRT6,
                       "--k", "0.3333333333333333", "--engine", "all")
    assert code == 0 and out.count(": convex") == 2


def test_check_disagreement(capsys, monkeypatch):
    from pedalfinsler import cli
    from pedalfinsler.report import CONVEX, NOT_CONVEX, ConvexityReport

    def fake(name, params, engine, density=1, seed=0):
        return ConvexityReport(CONVEX if engine == "closed_form" else NOT_CONVEX, 0.0, None, 1, 1.0, engine)

    monkeypatch.setattr(cli, "run_engine", fake)
    assert run(capsys, "check", "--family", "limacon", "--a", "3", "--k", "1", "--engine", "all")[0] == 4


def test_check_usage_errors(capsys):
    assert run(capsys, "check", "--family", "limacon", "--a", "3")[0] == 2
    assert run(capsys, "check", "--family", "limacon", "--a", "-3", "--k", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["check"])
    assert exc.value.code == 2


# -- sweep and norm ---------------------------------------------------------------

def test_sweep_with_boundary(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, text, _ = run(capsys, "sweep", "--family", "limacon", "--k", "1", "--param", "a", "--lo", "1.5", "--hi", "3",
                        "--steps", "16", "--out", str(out), "--boundary")
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 16 and list(rows[0]) == ["param", "verdict", "margin", "engine"]
    line = [l for l in text.splitlines() if l.startswith("boundary")]
    value = float(line[0].split()[1].split("=")[1])
    assert abs(value - 2) <= 1e-3


def test_sweep_offset_boundaries_to_stdout(capsys):
    code, text, err = run(capsys, "sweep", "--family", "offset_circle", "--param", "a", "--lo", "-0.9", "--hi", "0.9",
                          "--boundary")
    values = sorted(float(l.split()[1].split("=")[1]) for l in err.splitlines() if l.startswith("boundary"))
    assert text.startswith("param,verdict,margin,engine\n")
    assert len(values) == 2 and abs(values[0] + 0.5) <= 1e-3 and abs(values[1] - 0.5) <= 1e-3


def test_sweep_sphere_boundary(capsys):
    code, _, err = run(capsys, "sweep", "--family", "sphere", "--k", "0.3333333333333333", "--param", "r",
                       "--lo", "0.4", "--hi", "1.0", "--steps", "8", "--engine", "closed_form", "--boundary")
    value = float(err.split()[1].split("=")[1])
    assert abs(value - 2 / 3) <= 1e-3


def test_norm(capsys):
    code, out, _ = run(capsys, "norm", "--family", "slope2", "--a", "3", "--k", "1", "--y", "4", "0")
    assert code == 0
    assert float(out.split()[0].split("=")[1]) == pytest.approx(1.0, abs=1e-14)
    assert "positive_definite=yes" in out
    code, _, _ = run(capsys, "norm", "--family", "slope2", "--a", "1", "--k", "1", "--y", "-1", "0")
    assert code == 2
