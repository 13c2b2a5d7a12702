"""Planar primitives for convex polygons.

Points and vectors are plain ``numpy`` arrays of shape ``(2,)``.  All
tolerances are relative to the polygon scale (bounding-box diagonal).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateArea, DuplicateVertex, NonUnitDirection, NotConvex, TooFewVertices

TOL = 1e-9


def cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def check_unit(u, tol: float = 1e-9) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (2,) or not np.all(np.isfinite(u)) or abs(math.hypot(u[0], u[1]) - 1.0) > tol:
        raise NonUnitDirection(f"direction {u!r} is not a unit vector")
    return u


@dataclass(frozen=True)
class Halfplane:
    """The set ``{p : <normal, p> <= offset}``."""

    normal: np.ndarray
    offset: float


@dataclass(frozen=True)
class Segment:
    a: np.ndarray
    b: np.ndarray

    @property
    def length(self) -> float:
        return float(np.hypot(*(self.b - self.a)))


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Strictly convex polygon with vertices in counter-clockwise order.

    Build instances with :func:`make_polygon`; the constructor does not
    validate.
    """

    vertices: np.ndarray

    def __post_init__(self):
        self.vertices.setflags(write=False)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def scale(self) -> float:
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        return float(np.hypot(*(hi - lo)))

    @cached_property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))

    @cached_property
    def centroid(self) -> np.ndarray:
        p = self.vertices - self.vertices[0]
        q = np.roll(p, -1, axis=0)
        c = p[:, 0] * q[:, 1] - q[:, 0] * p[:, 1]
        a = c.sum() / 2.0
        out = ((p + q) * c[:, None]).sum(axis=0) / (6.0 * a)
        return out + self.vertices[0]

    @cached_property
    def normals(self) -> np.ndarray:
        """Outward unit normals; row i belongs to the edge from vertex i to i+1."""
        e = np.roll(self.vertices, -1, axis=0) - self.vertices
        nrm = np.column_stack([e[:, 1], -e[:, 0]])
        return nrm / np.linalg.norm(nrm, axis=1)[:, None]

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.einsum("ij,ij->i", self.normals, self.vertices)

    @property
    def halfplanes(self) -> list[Halfplane]:
        return [Halfplane(nv, float(c)) for nv, c in zip(self.normals, self.offsets)]

    @cached_property
    def _normal_angles(self):
        ang = np.arctan2(self.normals[:, 1], self.normals[:, 0])
        start = int(np.argmin(ang))
        order = [(start + k) % self.n for k in range(self.n)]
        unwrapped = np.unwrap(ang[order])
        return start, unwrapped.tolist()

    def transformed(self, linear, translation=(0.0, 0.0)) -> "ConvexPolygon":
        linear = np.asarray(linear, dtype=float)
        pts = self.vertices @ linear.T + np.asarray(translation, dtype=float)
        if np.linalg.det(linear) < 0:
            pts = pts[::-1]
        return ConvexPolygon(np.ascontiguousarray(pts))

    def rotated(self, theta: float) -> "ConvexPolygon":
        return self.transformed(rotation(theta))


def rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def make_polygon(points: Sequence, tol: float = TOL) -> ConvexPolygon:
    """Validate a vertex cycle and return it as a CCW ``ConvexPolygon``.

    Clockwise input is reversed.  Collinear consecutive vertices are
    rejected rather than merged so that edge indices stay meaningful.
    """
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise TooFewVertices("a polygon needs at least 3 vertices")
    if not np.all(np.isfinite(pts)):
        raise NotConvex("non-finite coordinates")
    n = len(pts)
    scale = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    d[np.diag_indices(n)] = np.inf
    if scale == 0.0 or d.min() <= tol * scale:
        raise DuplicateVertex("polygon has repeated vertices")
    try:
        hull_area = ConvexHull(pts).volume
    except QhullError:
        hull_area = 0.0
    if hull_area <= tol * scale * scale:
        raise DegenerateArea("polygon has (numerically) zero area")

    e = np.roll(pts, -1, axis=0) - pts
    e2 = np.roll(e, -1, axis=0)
    turns = e[:, 0] * e2[:, 1] - e[:, 1] * e2[:, 0]
    # sine of the turning angle must exceed tol
    thr = tol * np.linalg.norm(e, axis=1) * np.linalg.norm(e2, axis=1)
    if np.all(turns < -thr):
        pts = pts[::-1].copy()
        e = np.roll(pts, -1, axis=0) - pts
    elif not np.all(turns > thr):
        raise NotConvex("vertices do not make strict turns of one orientation")

    # all-left turns can still wind twice (star polygons)
    ang = np.arctan2(e[:, 1], e[:, 0])
    turning = np.mod(np.diff(np.append(ang, ang[0])), 2 * np.pi).sum()
    if abs(turning - 2 * np.pi) > 1e-6:
        raise NotConvex("vertex cycle winds more than once")

    return ConvexPolygon(np.ascontiguousarray(pts))


def directional_width(P: ConvexPolygon, u) -> float:
    u = check_unit(u)
    s = P.vertices @ u
    return float(s.max() - s.min())


def extremal_point(P: ConvexPolygon, u) -> tuple[int, np.ndarray]:
    """Vertex maximizing ``<p, u>``, found by bisection on edge-normal angles.

    Ties go to the smallest vertex index.
    """
    u = check_unit(u)
    n = P.n
    start, phi = P._normal_angles
    a = math.atan2(u[1], u[0])
    while a < phi[0]:
        a += 2 * math.pi
    while a >= phi[0] + 2 * math.pi:
        a -= 2 * math.pi
    k = bisect.bisect_left(phi, a)
    v = (start + k) % n
    V = P.vertices
    best = float(V[v] @ u)
    tol = TOL * P.scale
    tied = [v]
    for w in ((v - 1) % n, (v + 1) % n):
        val = float(V[w] @ u)
        if val > best + tol:
            # bisection landed on the wrong side of a breakpoint (rounding)
            v, best, tied = w, val, [w]
        elif abs(val - best) <= tol:
            tied.append(w)
    idx = min(tied)
    return idx, V[idx].copy()


def clip_line(P: ConvexPolygon, line) -> Optional[Segment]:
    """Chord of ``P`` along ``line = (point, direction)``; ``None`` if the line misses ``P``."""
    p0 = np.asarray(line[0], dtype=float)
    d = np.asarray(line[1], dtype=float)
    dn = math.hypot(d[0], d[1])
    if dn == 0.0:
        raise ValueError("line direction must be nonzero")
    d = d / dn
    tol = TOL * P.scale
    lo, hi = -math.inf, math.inf
    for nv, c in zip(P.normals, P.offsets):
        den = float(nv @ d)
        num = float(c - nv @ p0)
        if abs(den) <= 1e-15:
            if num < -tol:
                return None
            continue
        t = num / den
        if den > 0:
            hi = min(hi, t)
        else:
            lo = max(lo, t)
    if lo > hi + tol:
        return None
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return Segment(p0 + lo * d, p0 + hi * d)


def antipodal_pairs(P: ConvexPolygon) -> list[tuple[int, int]]:
    """Antipodal vertex pairs by rotating calipers, each as ``(i, j)`` with ``i < j``."""
    V = P.vertices
    n = P.n
    tol = TOL * P.scale**2
    pairs = set()
    j = 1
    for i in range(n):
        ni = (i + 1) % n
        e = V[ni] - V[i]
        for _ in range(n):
            if cross(e, V[(j + 1) % n] - V[j]) > tol:
                j = (j + 1) % n
            else:
                break
        cands = [(i, j), (ni, j)]
        if abs(cross(e, V[(j + 1) % n] - V[j])) <= tol:
            cands += [(i, (j + 1) % n), (ni, (j + 1) % n)]
        for a, b in cands:
            if a != b:
                pairs.add((min(a, b), max(a, b)))
    return sorted(pairs)


def diameter(P: ConvexPolygon) -> tuple[int, int, float]:
    V = P.vertices
    best = None
    for i, j in antipodal_pairs(P):
        d = float(np.hypot(*(V[j] - V[i])))
        if best is None or d > best[2] * (1 + 1e-12):
            best = (i, j, d)
    return best


def contains(P: ConvexPolygon, p, tol: float = 0.0) -> bool:
    p = np.asarray(p, dtype=float)
    return bool(np.all(P.normals @ p <= P.offsets + tol * P.scale))


def parallelogram_vertices(x, u, v) -> list[np.ndarray]:
    x, u, v = (np.asarray(a, dtype=float) for a in (x, u, v))
    return [x, x + u, x + v, x + u + v]


def regular_polygon(n: int, radius: float = 1.0, phase: float = 0.0) -> ConvexPolygon:
    t = phase + 2 * np.pi * np.arange(n) / n
    return make_polygon(radius * np.column_stack([np.cos(t), np.sin(t)]))


def random_polygon(n: int, seed: int = 0) -> ConvexPolygon:
    """Random convex ``n``-gon: radially jittered points at irregular angles, then a random stretch."""
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        w = rng.uniform(0.3, 1.7, n)
        gaps = 2 * np.pi * w / w.sum()
        t = rng.uniform(0, 2 * np.pi) + np.cumsum(gaps)
        jitter = min(0.3, 0.5 * (1.0 - math.cos(gaps.min())))
        r = 1.0 + jitter * rng.uniform(-1, 1, n)
        pts = np.column_stack([r * np.cos(t), r * np.sin(t)])
        stretch = np.diag([1.0, rng.uniform(0.4, 1.0)]) @ rotation(rng.uniform(0, np.pi))
        pts = pts @ stretch.T
        if len(ConvexHull(pts).vertices) == n:
            try:
                return make_polygon(pts)
            except NotConvex:
                continue
    raise RuntimeError(f"could not draw a random convex {n}-gon")
