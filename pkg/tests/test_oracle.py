import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import polygons
from inrect.exact import max_area_rectangle, max_perimeter_rectangle
from inrect.geometry import contains, diameter, regular_polygon
from inrect.oracle import fixed_orientation_best, sweep
from oracles import grid_rectangle_area


def test_square_axis(square):
    r = fixed_orientation_best(square, 0.0, "area")
    assert r.area == pytest.approx(1.0, abs=1e-9)
    assert r.method == "oracle"


def test_square_diamond(square):
    r = fixed_orientation_best(square, math.pi / 4, "area")
    assert r.area == pytest.approx(0.5, abs=1e-9)


def test_triangle_axis(right_triangle):
    r = fixed_orientation_best(right_triangle, 0.0, "area")
    assert r.area == pytest.approx(4.0, abs=1e-9)
    assert np.allclose(sorted(map(tuple, r.corners)), [(0, 0), (0, 2), (2, 0), (2, 2)], atol=1e-6)
    # a 2-D scan agrees with the concave program
    assert grid_rectangle_area(right_triangle.vertices) == pytest.approx(r.area, abs=1e-9)


def test_sweep_square(square):
    s = sweep(square, 0.01, "area")
    assert s.best.area == pytest.approx(1.0, abs=1e-9)
    assert min(s.theta, math.pi / 2 - s.theta) < 1e-6
    assert s.lower_bound and s.dtheta == 0.01


def test_sweep_below_exact():
    P = regular_polygon(7)
    assert sweep(P, 1e-2, "area").best.area <= max_area_rectangle(P).area + 1e-6 * P.scale**2


def test_sweep_matches_exact_12gon():
    P = regular_polygon(12)
    assert sweep(P, 1e-3, "area").best.area == pytest.approx(max_area_rectangle(P).area, rel=1e-6)
    assert sweep(P, 1e-3, "perimeter").best.perimeter == pytest.approx(max_perimeter_rectangle(P).perimeter, rel=1e-6)


def test_thin_triangle_segment(thin_triangle):
    r = sweep(thin_triangle, 1e-2, "perimeter").best
    assert r.perimeter == pytest.approx(2.0, abs=1e-6)
    assert r.degenerate


def test_bad_arguments(square):
    with pytest.raises(ValueError):
        sweep(square, 0.0)
    with pytest.raises(ValueError):
        fixed_orientation_best(square, 0.0, "volume")


@settings(max_examples=10)
@given(polygons(3, 10))
def test_halving_dtheta_never_decreases(P):
    for obj in ("area", "perimeter"):
        coarse = sweep(P, 0.04, obj, refine=False).best
        fine = sweep(P, 0.02, obj, refine=False).best
        a, b = (coarse.area, fine.area) if obj == "area" else (coarse.perimeter, fine.perimeter)
        assert b >= a - 1e-12 * max(1.0, a)


@settings(max_examples=10)
@given(polygons(3, 10))
def test_objective_consistency_and_feasibility(P):
    for obj in ("area", "perimeter"):
        r = sweep(P, 0.02, obj).best
        c = r.corners
        w, h = np.hypot(*(c[1] - c[0])), np.hypot(*(c[3] - c[0]))
        if not r.degenerate:
            assert r.area == pytest.approx(w * h, rel=1e-12)
        assert r.perimeter == pytest.approx(2 * (w + h), rel=1e-12)
        assert all(contains(P, p, 1e-9) for p in c)


@settings(max_examples=10)
@given(polygons(3, 10))
def test_perimeter_sweep_reaches_diameter(P):
    r = sweep(P, 1e-3, "perimeter").best
    assert r.perimeter >= 2 * diameter(P)[2] - 1e-9
