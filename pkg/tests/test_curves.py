from __future__ import annotations

import math

import numpy as np
import pytest

from pedalfinsler.curves import (CircleSpec, EllipseSpec, OffsetPedalCircleSpec, ellipse_convex_bound,
                                 ellipse_pedal_convex_sufficient, ellipse_pedal_implicit, limacon_convex,
                                 limacon_implicit, offset_pedal_convex, on_locus)
from pedalfinsler.errors import PreconditionViolated
from pedalfinsler.plane import ORIGIN2, AVOIDS, is_strongly_convex, origin_classification, pedal_eval
from pedalfinsler.report import CONVEX, NOT_CONVEX


def test_limacon_implicit_on_axis():
    assert limacon_implicit(CircleSpec(3, 1), [4.0, 0.0]) == 0.0


def test_limacon_implicit_on_samples(rng):
    spec = CircleSpec(3, 1)
    pts = pedal_eval(spec.curve(), ORIGIN2, rng.uniform(0, 2 * math.pi, 128))
    assert np.max(np.abs(limacon_implicit(spec, pts))) <= 1e-9 * 16 ** 2
    assert np.all(on_locus(limacon_implicit(spec, pts), pts, scale=16 ** 2))


def test_origin_excluded_from_locus():
    spec = CircleSpec(3, 1)
    assert limacon_implicit(spec, [0.0, 0.0]) == 0.0
    assert not on_locus(limacon_implicit(spec, [0.0, 0.0]), [0.0, 0.0])
    assert origin_classification(spec.curve(), ORIGIN2).verdict == AVOIDS


def test_ellipse_implicit(rng):
    spec = EllipseSpec(10, 9, 2)
    pts = spec.pedal(rng.uniform(0, 2 * math.pi, 128))
    scale = (spec.a + spec.k) ** 4
    assert np.max(np.abs(ellipse_pedal_implicit(spec, pts))) <= 1e-8 * scale
    x = spec.a + spec.k
    assert ellipse_pedal_implicit(spec, [x, 0.0]) == pytest.approx((x * x - spec.k * x) ** 2 - spec.a**2 * x * x, abs=1e-9)
    assert ellipse_pedal_implicit(spec, [x, 0.0]) == pytest.approx(0.0, abs=1e-9)


def test_ellipse_implicit_reduces_to_limacon(rng):
    pts = rng.normal(size=(50, 2))
    assert np.allclose(ellipse_pedal_implicit(EllipseSpec(3, 3, 1), pts), limacon_implicit(CircleSpec(3, 1), pts))


@pytest.mark.parametrize("spec,cfg", [
    (CircleSpec(3, 1), ORIGIN2),
    (CircleSpec(1, 1), ORIGIN2),
    (EllipseSpec(10, 9, 2), ORIGIN2),
    (EllipseSpec(10, 6, 2), ORIGIN2),
    (EllipseSpec(2, 7, 0.5), ORIGIN2),
    (OffsetPedalCircleSpec(0.3), None),
    (OffsetPedalCircleSpec(-0.7), None),
])
def test_closed_form_matches_generic(spec, cfg):
    cfg = cfg or spec.config()
    t = np.random.default_rng(1).uniform(0, 2 * math.pi, 1024)
    assert np.max(np.abs(spec.pedal(t) - pedal_eval(spec.curve(), cfg, t))) <= 1e-10


@pytest.mark.parametrize("a,k,expect", [(3, 1, True), (1, 1, False), (2, 1, False)])
def test_limacon_predicate(a, k, expect):
    assert limacon_convex(CircleSpec(a, k)) is expect


def test_limacon_predicate_matches_numeric_grid():
    grid = np.linspace(0.1, 5, 50)
    checked = 0
    for a in grid:
        for k in grid:
            if abs(a - 2 * k) < 5e-3:
                continue
            spec = CircleSpec(a, k)
            assert (is_strongly_convex(spec.curve(), n_samples=512).verdict == CONVEX) == limacon_convex(spec), (a, k)
            checked += 1
    assert checked > 2400


@pytest.mark.parametrize("a,expect", [(0.3, True), (0.7, False), (0.0, True), (-0.3, True), (-0.7, False), (0.5, False)])
def test_offset_predicate(a, expect):
    spec = OffsetPedalCircleSpec(a)
    assert offset_pedal_convex(spec) is expect
    if abs(abs(a) - 0.5) > 1e-3:
        assert (is_strongly_convex(spec.curve(), spec.config()).verdict == CONVEX) is expect


def test_ellipse_bound_value():
    assert ellipse_convex_bound(EllipseSpec(10, 9, 2)) == pytest.approx(math.sqrt(76))
    assert ellipse_convex_bound(EllipseSpec(10, 9, 2)) == pytest.approx(8.7178, abs=1e-4)


@pytest.mark.parametrize("b,expect,verdict", [(9, True, CONVEX), (6, False, NOT_CONVEX)])
def test_ellipse_figure_cases(b, expect, verdict):
    spec = EllipseSpec(10, b, 2)
    assert ellipse_pedal_convex_sufficient(spec) is expect
    assert is_strongly_convex(spec.curve()).verdict == verdict


def test_ellipse_condition_reduces_to_limacon():
    for a, k in [(3, 1), (1, 1), (2.5, 1), (5, 2)]:
        # with b = a, b > bound  <=>  (a - k)(a - 2k) > 0
        spec = EllipseSpec(a, a, k)
        assert (a > ellipse_convex_bound(spec)) == ((a - k) * (a - 2 * k) > 0)
    with pytest.raises(PreconditionViolated):
        ellipse_pedal_convex_sufficient(EllipseSpec(3, 3, 1))


def test_ellipse_sufficient_implies_convex(rng):
    n = 0
    while n < 200:
        k = rng.uniform(0.2, 2)
        a = rng.uniform(2 * k + 0.05, 12 * k)
        bound = math.sqrt((3 * a * k + a * a - 2 * k * k) / 2)
        spec = EllipseSpec(a, rng.uniform(bound, a), k)
        if spec.b <= spec.a and ellipse_pedal_convex_sufficient(spec):
            assert is_strongly_convex(spec.curve(), n_samples=1024).verdict == CONVEX, spec
            n += 1


def test_specs_reject_bad_parameters():
    with pytest.raises(PreconditionViolated):
        CircleSpec(-1, 1)
    with pytest.raises(PreconditionViolated):
        EllipseSpec(1, 0, 1)
    with pytest.raises(PreconditionViolated):
        OffsetPedalCircleSpec(float("nan"))
