import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import polygons
from inrect import errors
from inrect.geometry import ConvexPolygon, contains, make_polygon, parallelogram_vertices, regular_polygon
from inrect.pspace import (
    build_space,
    constraints_of,
    dump_simplices,
    interior_point,
    member,
    simplex_volume,
    triangulate,
    triangulation_indices,
)
from oracles import brute_force_vertices, constraint_matrix, monte_carlo_volume

SQUARE_Z = np.array([0, 0, 1, 0, 0, 1.0])


# constraints_of / member

def test_square_has_16_constraints(square):
    assert len(constraints_of(square)) == 16


def test_square_encodes_itself(square):
    C = constraints_of(square)
    assert member(C, SQUARE_Z, 0.0)


def test_x_plus_u_violation(square):
    C = constraints_of(square)
    z = np.array([0, 0, 1.5, 0, 0, 1.0])
    bad = [C[i].tag for i in np.flatnonzero(C.slack(z) < 0)]
    assert (1, "x+u") in bad  # edge 1 is x = 1
    assert not member(C, z)


def test_constraints_match_oracle(square):
    C = constraints_of(square)
    A, b = constraint_matrix(square.vertices)
    assert np.allclose(C.A, A) and np.allclose(C.b, b)


def test_member_examples(square):
    C = constraints_of(square)
    assert member(C, [0.5, 0.5, 0, 0, 0, 0])
    assert member(C, SQUARE_Z)
    assert not member(C, [0, 0, 1, 0, 0, 1.01])


@given(polygons(3, 8), st.integers(0, 2**32 - 1))
def test_member_equals_corner_containment(P, seed):
    C = constraints_of(P)
    rng = np.random.default_rng(seed)
    lo, hi = P.vertices.min(0), P.vertices.max(0)
    for _ in range(250):
        x = rng.uniform(lo, hi)
        u, v = rng.normal(0, 0.3 * P.scale, (2, 2))
        inside = all(contains(P, c, 1e-9) for c in parallelogram_vertices(x, u, v))
        assert member(C, np.r_[x, u, v], 1e-9) == inside


# interior_point

def test_interior_point_square(square):
    z = interior_point(square)
    assert np.allclose(z, [0.5, 0.5, 0, 0, 0, 0])
    assert constraints_of(square).slack(z).min() == pytest.approx(0.5)


def test_interior_point_triangle():
    z = interior_point(make_polygon([(0, 0), (3, 0), (0, 3)]))
    assert np.allclose(z, [1, 1, 0, 0, 0, 0])


def test_interior_point_thin_triangle():
    P = ConvexPolygon(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1e-12]]))
    with pytest.raises(errors.DegeneratePolygon):
        interior_point(P)


# vertex_enumeration

@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_vertices_match_subset_oracle(n):
    P = make_polygon([(0, 0), (1, 0), (1, 1), (0, 1)]) if n == 4 else regular_polygon(n)
    space = build_space(P)
    ref = brute_force_vertices(P.vertices)
    assert len(space.vertices) == len(ref)
    d = np.abs(space.vertices[:, None, :] - ref[None, :, :]).max(-1)
    assert d.min(1).max() < 1e-7 * P.scale


def test_square_vertex_count(square):
    # 6-subset oracle count for the unit square
    assert len(build_space(square).vertices) == 36


def test_square_itself_is_a_vertex(square):
    space = build_space(square)
    k = int(np.argmin(np.abs(space.vertices - SQUARE_Z).max(1)))
    assert np.allclose(space.vertices[k], SQUARE_Z, atol=1e-12)
    # each corner of the square lies on two edges
    assert len(space.vertex_facets[k]) == 8


@given(polygons(3, 7))
def test_vertices_feasible_and_simple_enough(P):
    space = build_space(P)
    C = space.constraints
    assert all(member(C, z, 1e-9) for z in space.vertices)
    assert all(len(f) >= 6 for f in space.vertex_facets)
    assert C.slack(space.interior).min() > 1e-9 * P.scale


# triangulate

def test_triangulation_volume_matches_monte_carlo():
    P = regular_polygon(3)
    space = build_space(P)
    vol = simplex_volume(space.vertices[triangulation_indices(space)]).sum()
    est, se = monte_carlo_volume(P.vertices, 400_000, seed=11)
    assert abs(vol - est) <= 3 * se


def test_simplices_use_polytope_vertices(hexagon):
    space = build_space(hexagon)
    idx = triangulation_indices(space)
    assert idx.shape[1] == 7
    assert idx.min() >= 0 and idx.max() < len(space.vertices)
    assert np.all(simplex_volume(space.vertices[idx]) > 1e-12 * space.scale**6)


def test_random_point_in_simplex_is_member(hexagon):
    space = build_space(hexagon)
    rng = np.random.default_rng(5)
    simplices = triangulate(space)
    for s in rng.choice(len(simplices), 200, replace=False):
        z = rng.dirichlet(np.ones(7)) @ simplices[s].vertices
        assert member(space.constraints, z, 1e-9)


def test_simplex_vertices_satisfy_all_constraints(square):
    space = build_space(square)
    Z = space.vertices[triangulation_indices(space)].reshape(-1, 6)
    assert space.constraints.slack(Z).min() >= -1e-9 * square.scale


def test_simplex_interiors_disjoint_by_volume(square):
    # volumes add up to the polytope volume computed independently by a hull
    from scipy.spatial import ConvexHull

    space = build_space(square)
    vol = simplex_volume(space.vertices[triangulation_indices(space)]).sum()
    assert vol == pytest.approx(ConvexHull(space.vertices).volume, rel=1e-9)


def test_dump_simplices(tmp_path, square):
    space = build_space(square)
    out = tmp_path / "simp.txt"
    dump_simplices(space, out)
    lines = out.read_text().splitlines()
    assert len(lines) == len(triangulation_indices(space))
    assert all(len(line.split()) == 42 for line in lines)
