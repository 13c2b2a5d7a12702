"""Exact maximum-area and maximum-perimeter inscribed rectangles.

The parallelogram polytope of the polygon is triangulated and the rectangle
program is maximized over the faces of the triangulation (see
:mod:`inrect.simplex_opt`).  Because most simplices cannot beat a good
feasible rectangle, the search is organized as branch and bound:

1. an incumbent from the polytope vertices, its triangulation edges and a
   coarse orientation sweep;
2. per-simplex upper bounds discard most simplices;
3. the 3- and 4-vertex faces of the survivors are deduplicated and only
   those spanning a 2- or 3-dimensional face of the polytope are kept (on
   faces of dimension 4 or more the maximum is also attained on their
   boundary, and a cell that does not span its carrier face is covered by
   the cells that do);
4. those are bounded again and solved in decreasing order of their bound
   until no remaining bound exceeds the incumbent.

Work is done in coordinates centred at the polygon centroid and divided by
the polygon scale.  Polytopes, triangulations and results are cached per
polygon (keyed by the exact vertex coordinates).
"""

from __future__ import annotations

import copy
import time
from collections import OrderedDict
from itertools import combinations

import numpy as np

from . import simplex_opt as so
from .errors import NumericalDegeneracy
from .geometry import ConvexPolygon, TOL
from .oracle import sweep
from .pspace import ParallelogramSpace, build_space, triangulation_indices
from .solution import RectangleSolution, canonicalize, from_xuv

AREA = so.AREA
PERIMETER = so.PERIMETER

CHUNK = 40000
FACE_CHUNK = 256
PRUNE_SLACK = 1e-10
IMPROVE_REL = 1e-9
TIE_REL = 1e-12
INCUMBENT_DTHETA = 0.05
_CACHE: "OrderedDict[bytes, tuple]" = OrderedDict()
CACHE_SIZE = 4
_RESULTS: "OrderedDict[tuple, RectangleSolution]" = OrderedDict()
RESULT_CACHE_SIZE = 256

_SUB = {k: np.array(list(combinations(range(7), k)), dtype=np.intp) for k in (2, 3, 4)}


def prepared(P: ConvexPolygon) -> tuple[ParallelogramSpace, np.ndarray, np.ndarray, dict]:
    """Polytope, triangulation, vertex tight sets and build timings of ``P`` (cached)."""
    key = P.vertices.tobytes()
    hit = _CACHE.get(key)
    if hit is not None:
        _CACHE.move_to_end(key)
        return hit
    t0 = time.perf_counter()
    space = build_space(P)
    t1 = time.perf_counter()
    simp = triangulation_indices(space)
    t2 = time.perf_counter()
    entry = (space, simp, tight_bits(space), {"build_ms": 1e3 * (t1 - t0), "triangulate_ms": 1e3 * (t2 - t1)})
    _CACHE[key] = entry
    while len(_CACHE) > CACHE_SIZE:
        _CACHE.popitem(last=False)
    return entry


def clear_cache() -> None:
    """Drop cached polytopes and results (used by timing runs)."""
    _CACHE.clear()
    _RESULTS.clear()


def _unique_faces(simp: np.ndarray, k: int) -> np.ndarray:
    """Distinct ``k``-vertex faces of the simplices, as sorted index rows."""
    sub = simp[:, _SUB[k]].reshape(-1, k).astype(np.uint64)
    key = np.zeros(len(sub), dtype=np.uint64)
    for j in range(k):
        key = (key << np.uint64(16)) | sub[:, j]
    key = np.unique(key)
    out = np.empty((len(key), k), dtype=np.intp)
    for j in range(k - 1, -1, -1):
        out[:, j] = (key & np.uint64(0xFFFF)).astype(np.intp)
        key = key >> np.uint64(16)
    return out


def tight_bits(space: ParallelogramSpace) -> np.ndarray:
    """Tight-constraint sets of the vertices as packed bit rows ``(V, words)``."""
    nc = len(space.constraints)
    tight = np.zeros((len(space.vertices), 64 * ((nc + 63) // 64)), dtype=bool)
    for v, fs in enumerate(space.vertex_facets):
        tight[v, list(fs)] = True
    return np.packbits(tight, axis=1, bitorder="little").view(np.uint64)


def spanning_cells(space: ParallelogramSpace, bits: np.ndarray, F: np.ndarray) -> np.ndarray:
    """True where the vertex rows ``F`` span the smallest polytope face containing them.

    That face is cut out by the constraints tight at all of its vertices; it
    has dimension ``k - 1`` exactly when those constraints have rank ``7 - k``.
    """
    k = F.shape[1]
    common = np.ascontiguousarray(np.bitwise_and.reduce(bits[F], axis=1))
    if common.shape[1] == 1:
        uniq, inv = np.unique(common[:, 0], return_inverse=True)
        uniq = uniq[:, None]
    else:
        uniq, inv = np.unique(common, axis=0, return_inverse=True)
    nc = len(space.constraints)
    A = space.constraints.A
    mask = np.unpackbits(uniq.view(np.uint8), axis=1, bitorder="little")[:, :nc].astype(float)
    M = np.einsum("ui,ij,ik->ujk", mask, A, A)
    ev = np.linalg.eigvalsh(M)
    rank = (ev > 1e-9 * np.maximum(ev[:, -1:], 1e-300)).sum(axis=1)
    rank[mask.sum(axis=1) == 0] = 0
    return rank[inv.ravel()] == 7 - k


class _Incumbent:
    """Best candidate so far; near-ties go to the lexicographically smallest point."""

    def __init__(self):
        self.value = -np.inf
        self.z: np.ndarray | None = None

    def offer(self, val: np.ndarray, z: np.ndarray) -> None:
        ok = np.isfinite(val)
        if not ok.any():
            return
        val, z = val[ok], z[ok]
        if self.z is not None:
            val = np.append(val, self.value)
            z = np.vstack([z, self.z])
        top = val.max()
        near = np.flatnonzero(val >= top - TIE_REL * abs(top))
        j = near[np.lexsort(z[near].T[::-1])[0]]
        self.value, self.z = float(val[j]), z[j].copy()


def _solve(P: ConvexPolygon, kind: str) -> RectangleSolution:
    space, simp, bits, timings = prepared(P)
    t0 = time.perf_counter()
    s = P.scale
    shift = np.array([*P.centroid, 0.0, 0.0, 0.0, 0.0])
    Zn = (space.vertices - shift) / s
    inc = _Incumbent()
    stats = {"vertices": len(Zn), "simplices": len(simp)}

    inc.offer(so.vertex_values(Zn, kind), Zn)
    # a coarse sweep gives a certified feasible value for pruning; it is never returned
    warm = sweep(P, INCUMBENT_DTHETA, kind, refine=False).best
    lower = (warm.area / s**2) ** 2 if kind == AREA else warm.perimeter / (2 * s)

    def thr() -> float:
        # a region is skipped once its bound cannot beat a polytope candidate by
        # more than IMPROVE_REL, or cannot reach the feasible sweep value
        return max(inc.value * (1 + IMPROVE_REL), lower * (1 - PRUNE_SLACK))

    keep = []
    for i in range(0, len(simp), CHUNK):
        W = Zn[simp[i : i + CHUNK]]
        cand = np.flatnonzero(so.upper_bounds(W, kind, mu_search=False) > thr())
        if len(cand):
            ub = so.upper_bounds(W[cand], kind, mu_search=True)
            keep.append(i + cand[ub > thr()])
    live = simp[np.concatenate(keep)] if keep else simp[:0]
    stats["simplices_live"] = len(live)

    solved = 0
    if len(live):
        E = _unique_faces(live, 2)
        row, t, val = so.edge_candidates(Zn[E], kind)
        inc.offer(val, (1 - t)[:, None] * Zn[E[row, 0]] + t[:, None] * Zn[E[row, 1]])
        stats["edges"] = len(E)
        for k in (3, 4):
            F = _unique_faces(live, k)
            F = F[spanning_cells(space, bits, F)]
            F = F[~so.redundant_faces(Zn[F])]
            F = F[so.upper_bounds(Zn[F], kind, mu_search=False) > thr()]
            ub = so.upper_bounds(Zn[F], kind, mu_search=True)
            F, ub = F[ub > thr()], ub[ub > thr()]
            order = np.argsort(-ub, kind="stable")
            stats[f"faces{k}"] = len(order)
            for i in range(0, len(order), FACE_CHUNK):
                idx = order[i : i + FACE_CHUNK]
                idx = idx[ub[idx] > thr()]
                if len(idx) == 0:
                    break
                W = Zn[F[idx]]
                val, lam, _ = so.face_candidates(W, kind)
                inc.offer(val, np.einsum("nk,nkj->nj", lam, W))
                solved += len(idx)
    stats["faces_solved"] = solved

    if inc.z is None or inc.value < lower * (1 - 1e-8):
        raise NumericalDegeneracy("exact search ended below a known feasible rectangle")
    z = inc.z * s + shift
    meta = dict(timings)
    meta["solve_ms"] = 1e3 * (time.perf_counter() - t0)
    meta["rotation"] = space.rotation
    meta["stats"] = stats
    return canonicalize(from_xuv(z[0:2], z[2:4], z[4:6], "exact", s, meta))


def _cached_solve(P: ConvexPolygon, kind: str) -> RectangleSolution:
    key = (P.vertices.tobytes(), kind)
    sol = _RESULTS.get(key)
    if sol is None:
        sol = _solve(P, kind)
        _RESULTS[key] = sol
        while len(_RESULTS) > RESULT_CACHE_SIZE:
            _RESULTS.popitem(last=False)
    else:
        _RESULTS.move_to_end(key)
    return copy.deepcopy(sol)


def max_area_rectangle(P: ConvexPolygon) -> RectangleSolution:
    """Largest-area rectangle contained in ``P``."""
    return _cached_solve(P, AREA)


def max_perimeter_rectangle(P: ConvexPolygon) -> RectangleSolution:
    """Largest-perimeter rectangle contained in ``P`` (possibly a segment)."""
    return _cached_solve(P, PERIMETER)
