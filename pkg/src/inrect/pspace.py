"""The polytope of parallelograms contained in a convex polygon.

A point ``z = (x1, x2, u1, u2, v1, v2)`` of R^6 encodes the parallelogram
with corners ``x, x+u, x+v, x+u+v``.  It lies inside ``P`` iff every corner
satisfies every edge halfplane, which gives 4n linear constraints.

Vertices are enumerated through polar duality about an interior point (the
hull of the dual points is computed by Qhull) and the polytope is cut into
6-simplices by a pulling triangulation: every face is coned from its
lexicographically smallest vertex over the triangulations of its facets.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .errors import DegeneratePolygon, NotFullDimensional, NumericalDegeneracy, UnboundedPolytope
from .geometry import TOL, ConvexPolygon

CORNERS = ("x", "x+u", "x+v", "x+u+v")
_BLOCKS = {"x": (0,), "x+u": (0, 1), "x+v": (0, 2), "x+u+v": (0, 1, 2)}


@dataclass(frozen=True)
class Constraint6:
    """``{z : <normal, z> <= offset}``; ``tag = (edge index, corner)``."""

    normal: np.ndarray
    offset: float
    tag: tuple[int, str]


class ConstraintSet(Sequence):
    """The 4n constraints of a polygon, with matrix views ``A z <= b``."""

    def __init__(self, items: list[Constraint6], scale: float):
        self._items = items
        self.A = np.array([c.normal for c in items])
        self.b = np.array([c.offset for c in items])
        self.scale = scale
        self.A.setflags(write=False)
        self.b.setflags(write=False)

    def __getitem__(self, i):
        return self._items[i]

    def __len__(self):
        return len(self._items)

    def slack(self, z) -> np.ndarray:
        return self.b - np.asarray(z, dtype=float) @ self.A.T


@dataclass(frozen=True)
class Simplex6:
    vertices: np.ndarray

    @property
    def volume(self) -> float:
        return simplex_volume(self.vertices[None])[0]


@dataclass(eq=False)
class ParallelogramSpace:
    polygon: ConvexPolygon
    constraints: ConstraintSet
    interior: np.ndarray
    vertices: np.ndarray
    vertex_facets: list[frozenset]
    rotation: float = 0.0
    _simplices: np.ndarray | None = field(default=None, repr=False)

    @property
    def scale(self) -> float:
        return self.polygon.scale

    @property
    def dim(self) -> int:
        d = self.vertices - self.vertices.mean(axis=0)
        s = np.linalg.svd(d, compute_uv=False)
        return int(np.sum(s > 1e-9 * max(self.scale, s[0])))


def constraints_of(P: ConvexPolygon) -> ConstraintSet:
    items = []
    for i, (nv, c) in enumerate(zip(P.normals, P.offsets)):
        for corner in CORNERS:
            row = np.zeros(6)
            for blk in _BLOCKS[corner]:
                row[2 * blk : 2 * blk + 2] = nv
            items.append(Constraint6(row, float(c), (i, corner)))
    return ConstraintSet(items, P.scale)


def member(constraints: ConstraintSet, z, tol: float = TOL) -> bool:
    return bool(np.all(constraints.slack(z) >= -tol * constraints.scale))


def interior_point(P: ConvexPolygon) -> np.ndarray:
    c = P.centroid
    z = np.array([c[0], c[1], 0.0, 0.0, 0.0, 0.0])
    if np.min(P.offsets - P.normals @ c) <= TOL * P.scale:
        raise DegeneratePolygon("polygon has no interior point with positive slack")
    return z


def _merge(Z: np.ndarray, radius: float) -> np.ndarray:
    pairs = cKDTree(Z).query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        return Z
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(Z), len(Z)))
    ncomp, labels = connected_components(g, directed=False)
    out = np.zeros((ncomp, Z.shape[1]))
    np.add.at(out, labels, Z)
    return out / np.bincount(labels)[:, None]


def _refine(Z: np.ndarray, A: np.ndarray, b: np.ndarray, scale: float, thresh: float) -> np.ndarray:
    """Least-squares re-solve of each vertex on its near-tight constraints."""
    W = (b[None, :] - Z @ A.T) <= thresh * scale
    M = np.einsum("vi,ij,ik->vjk", W.astype(float), A, A)
    r = np.einsum("vi,ij,i->vj", W.astype(float), A, b)
    ok = np.linalg.matrix_rank(M, tol=1e-10) == 6
    if not np.all(ok):
        raise NumericalDegeneracy("vertex with fewer than 6 independent tight constraints")
    return np.linalg.solve(M, r[..., None])[..., 0]


def vertex_enumeration(constraints: ConstraintSet, interior) -> tuple[np.ndarray, list[frozenset]]:
    """All vertices of ``{z : A z <= b}`` with their tight-constraint index sets."""
    A, b, scale = constraints.A, constraints.b, constraints.scale
    z0 = np.asarray(interior, dtype=float)
    s = b - A @ z0
    if s.min() <= TOL * scale:
        raise DegeneratePolygon("interior point is not strictly feasible")
    dual = A / s[:, None]
    try:
        hull = ConvexHull(dual)
    except QhullError as exc:
        raise NumericalDegeneracy(f"dual hull failed: {exc}") from exc
    eq = hull.equations
    if np.any(eq[:, -1] >= -1e-12 * np.abs(eq[:, -1]).max()):
        raise UnboundedPolytope("origin on the dual hull boundary: the constraint set is unbounded")
    # each (triangulated) dual facet names 6 constraints whose solution is the vertex;
    # flat facet pieces fall back to the facet hyperplane
    Z = z0 + eq[:, :6] / (-eq[:, 6:7])
    M = A[hull.simplices]
    ok = np.abs(np.linalg.det(M)) > 1e-9
    Z[ok] = np.linalg.solve(M[ok], b[hull.simplices][ok][..., None])[..., 0]
    Z = _merge(Z, TOL * scale)
    Z = _refine(Z, A, b, scale, TOL)
    Z = _merge(Z, TOL * scale)
    slack = b[None, :] - Z @ A.T
    if slack.min() < -TOL * scale:
        raise NumericalDegeneracy("refined vertex violates a constraint")
    tight = slack <= TOL * scale
    counts = tight.sum(axis=1)
    if counts.min() < 6:
        raise NumericalDegeneracy("vertex with fewer than 6 tight constraints")
    order = np.lexsort(Z.T[::-1])
    Z = Z[order]
    facets = [frozenset(np.flatnonzero(t).tolist()) for t in tight[order]]
    return Z, facets


def build_space(P: ConvexPolygon, seed: int = 0, retries: int = 3) -> ParallelogramSpace:
    """Construct the parallelogram polytope of ``P``.

    On a numerical failure the polygon is rotated by a small random angle
    and the enumeration repeated; the angle is recorded in ``rotation``.
    """
    cons = constraints_of(P)
    rng = np.random.default_rng(seed)
    theta = 0.0
    last = None
    for attempt in range(retries + 1):
        Q = P if theta == 0.0 else P.rotated(theta)
        try:
            c2 = cons if theta == 0.0 else constraints_of(Q)
            Z, facets = vertex_enumeration(c2, interior_point(Q))
        except NumericalDegeneracy as exc:
            last = exc
            theta = float(rng.uniform(0.0, 1e-3))
            continue
        if theta != 0.0:
            R = np.kron(np.eye(3), np.array([[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]]))
            Z = Z @ R.T
            slack = cons.b[None, :] - Z @ cons.A.T
            tight = slack <= 1e-7 * P.scale
            order = np.lexsort(Z.T[::-1])
            Z = Z[order]
            facets = [frozenset(np.flatnonzero(t).tolist()) for t in tight[order]]
        return ParallelogramSpace(P, cons, interior_point(P), Z, facets, rotation=theta)
    raise last


def simplex_volume(S: np.ndarray) -> np.ndarray:
    """6-volumes of a stack of simplices ``(m, 7, 6)``."""
    M = S[:, 1:, :] - S[:, :1, :]
    return np.abs(np.linalg.det(M)) / 720.0


def triangulation_indices(space: ParallelogramSpace) -> np.ndarray:
    """Pulling triangulation as an ``(m, 7)`` array of vertex indices (cached)."""
    if space._simplices is not None:
        return space._simplices
    nv = len(space.vertices)
    if nv < 7 or space.dim < 6:
        raise NotFullDimensional("parallelogram space is not 6-dimensional")
    ncons = len(space.constraints)
    cols: list[list[int]] = [[] for _ in range(ncons)]
    for v, fs in enumerate(space.vertex_facets):
        for i in fs:
            cols[i].append(v)
    masks = set()
    for vs in cols:
        m = 0
        for v in vs:
            m |= 1 << v
        if m and len(vs) < nv:
            masks.add(m)
    masks = sorted(masks)

    def facets_of(F: int) -> list[int]:
        cand = {F & m for m in masks}
        cand.discard(0)
        cand.discard(F)
        out: list[int] = []
        for g in sorted(cand, key=lambda g: -g.bit_count()):
            if not any(g | h == h for h in out):
                out.append(g)
        return out

    memo: dict[int, np.ndarray] = {}

    def pull(F: int, d: int) -> np.ndarray:
        hit = memo.get(F)
        if hit is not None:
            return hit
        apex = (F & -F).bit_length() - 1
        if d == 0:
            if F.bit_count() != 1:
                raise NumericalDegeneracy("face lattice inconsistent (vertex)")
            res = np.array([[apex]], dtype=np.int32)
        elif d == 1:
            if F.bit_count() != 2:
                raise NumericalDegeneracy("face lattice inconsistent (edge)")
            other = (F ^ (1 << apex)).bit_length() - 1
            res = np.array([[apex, other]], dtype=np.int32)
        else:
            parts = [pull(G, d - 1) for G in facets_of(F) if not (G >> apex) & 1]
            if not parts:
                raise NumericalDegeneracy("face lattice inconsistent (empty cone)")
            sub = np.concatenate(parts)
            res = np.hstack([np.full((len(sub), 1), apex, dtype=np.int32), sub])
        memo[F] = res
        return res

    simp = pull((1 << nv) - 1, 6)
    memo.clear()
    vol = simplex_volume(space.vertices[simp])
    simp = simp[vol > 1e-12 * space.scale**6]
    space._simplices = simp
    return simp


def triangulate(space: ParallelogramSpace) -> list[Simplex6]:
    idx = triangulation_indices(space)
    return [Simplex6(space.vertices[s]) for s in idx]


def dump_simplices(space: ParallelogramSpace, path) -> None:
    """Debug dump: one simplex per line, 42 numbers."""
    idx = triangulation_indices(space)
    with open(path, "w") as fh:
        for s in idx:
            fh.write(" ".join(repr(float(x)) for x in space.vertices[s].ravel()) + "\n")
