import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inrect import errors
from inrect.exact import prepared
from inrect.geometry import random_polygon, regular_polygon
from inrect.simplex_opt import max_area_on_simplex, max_halfperimeter_on_simplex
from oracles import sampled_simplex_max

Z_STAR = np.array([0, 0, 1, 0, 0, 1.0])


def barycentric(Z, z):
    M = np.vstack([Z.T, np.ones(7)])
    return np.linalg.solve(M, np.r_[z, 1.0])


def tiny_simplex(seed=0, r=1e-3):
    rng = np.random.default_rng(seed)
    D = rng.uniform(-r, r, (7, 6))
    D -= D.mean(0)  # centroid, and hence z*, inside
    return Z_STAR + D


def cone_simplex(seed=0):
    # u near (1,0) and v near (1,1): <u,v> stays near 1
    rng = np.random.default_rng(seed)
    base = np.array([0, 0, 1, 0, 1, 1.0])
    return base + rng.uniform(-0.05, 0.05, (7, 6))


def flat_simplex(seed=0):
    rng = np.random.default_rng(seed)
    Z = rng.uniform(-0.3, 0.3, (7, 6))
    Z[:, 4:] = 0.0
    Z[0] = [0, 0, 1, 0, 0, 0]
    Z[1:, 2:4] *= 0.5
    return Z


def test_infeasible_simplex_gives_zero():
    Z = cone_simplex()
    q = np.einsum("ij,ij->i", Z[:, 2:4], Z[:, 4:6])
    assert q.min() >= 0.1 * 1.0  # scale of this simplex is about 1
    for f in (max_area_on_simplex, max_halfperimeter_on_simplex):
        r = f(Z)
        assert r.value == 0.0 and not r.feasible and r.argmax is None


def test_tiny_simplex_area():
    r = max_area_on_simplex(tiny_simplex())
    assert r.feasible
    assert r.value == pytest.approx(1.0, abs=1e-2)
    # the sampling oracle never beats the solver
    assert r.value >= sampled_simplex_max(tiny_simplex(), "area", 20_000, 1) - 1e-12


def test_tiny_simplex_perimeter():
    r = max_halfperimeter_on_simplex(tiny_simplex())
    assert r.value == pytest.approx(2.0, abs=1e-2)
    assert r.value >= sampled_simplex_max(tiny_simplex(), "perimeter", 20_000, 1) - 1e-12


def test_flat_simplex_area_is_zero():
    r = max_area_on_simplex(flat_simplex(), allow_degenerate=True)
    assert r.value == 0.0


def test_flat_simplex_perimeter_is_segment():
    Z = flat_simplex()
    assert np.hypot(Z[:, 2], Z[:, 3]).argmax() == 0
    r = max_halfperimeter_on_simplex(Z, allow_degenerate=True)
    assert r.value == pytest.approx(1.0, abs=1e-12)


def test_degenerate_simplex_rejected():
    with pytest.raises(errors.DegenerateSimplex):
        max_area_on_simplex(flat_simplex())
    with pytest.raises(errors.DegenerateSimplex):
        max_area_on_simplex(np.zeros((6, 6)))


def _check(Z, r, kind):
    scale = np.linalg.norm(Z.max(0) - Z.min(0))
    if not r.feasible:
        return
    lam = barycentric(Z, r.argmax)
    assert lam.min() >= -1e-9 and lam.max() <= 1 + 1e-9
    u, v = r.argmax[2:4], r.argmax[4:6]
    assert abs(u @ v) <= 1e-9 * scale**2
    val = (u @ u) * (v @ v) if kind == "area" else np.hypot(*u) + np.hypot(*v)
    assert val == pytest.approx(r.value, rel=1e-9, abs=1e-15)
    q = np.einsum("ij,ij->i", Z[:, 2:4], Z[:, 4:6])
    vert = [(z[2:4] @ z[2:4]) * (z[4:6] @ z[4:6]) if kind == "area" else np.hypot(*z[2:4]) + np.hypot(*z[4:6])
            for z in Z[np.abs(q) <= 1e-12 * scale**2]]
    assert all(r.value >= w - 1e-12 * max(1, w) for w in vert)


@pytest.fixture(scope="module")
def hexagon_simplices():
    space, simp, _, _ = prepared(regular_polygon(6))
    return space.vertices[simp]


@given(st.integers(0, 10**6))
def test_area_beats_sampling_on_polytope_simplices(hexagon_simplices, seed):
    Z = hexagon_simplices[seed % len(hexagon_simplices)]
    r = max_area_on_simplex(Z)
    _check(Z, r, "area")
    ref = sampled_simplex_max(Z, "area", 1000, seed)
    assert r.value >= ref - 1e-9 * max(ref, 1e-12)


@given(st.integers(0, 10**6))
def test_perimeter_beats_sampling_on_polytope_simplices(hexagon_simplices, seed):
    Z = hexagon_simplices[seed % len(hexagon_simplices)]
    r = max_halfperimeter_on_simplex(Z)
    _check(Z, r, "perimeter")
    ref = sampled_simplex_max(Z, "perimeter", 1000, seed)
    assert r.value >= ref - 1e-9 * max(ref, 1e-12)


@settings(max_examples=15)
@given(st.integers(0, 10**6))
def test_random_simplices(seed):
    rng = np.random.default_rng(seed)
    Z = rng.normal(0, 1, (7, 6))
    for f, kind in ((max_area_on_simplex, "area"), (max_halfperimeter_on_simplex, "perimeter")):
        r = f(Z)
        _check(Z, r, kind)
        ref = sampled_simplex_max(Z, kind, 1000, seed)
        assert r.value >= ref - 1e-9 * max(ref, 1e-12)


def test_deterministic():
    space, simp, _, _ = prepared(random_polygon(7, seed=4))
    Z = space.vertices[simp[len(simp) // 2]]
    a = max_area_on_simplex(Z)
    b = max_area_on_simplex(Z.copy())
    assert a.value == b.value
    assert (a.argmax is None and b.argmax is None) or np.array_equal(a.argmax, b.argmax)
