"""Polygons with a cubic number of combinatorially distinct inscribed rectangles.

Points are placed on the unit circle ``C`` (centre ``o``) in four groups:

* ``T``: ``n`` points at angles spread uniformly over [60, 120] degrees;
* ``L``, ``R``: ``n`` points each, packed into the strip ``-eps <= y <= 0``
  on the left and right of ``C``;
* ``B``: two points below ``C`` that keep the lower corners inside.

For points ``r`` on an edge of ``R`` and ``l`` on an edge of ``L`` the circle
with diameter ``rl`` has its upper half between ``C`` and the circle ``C'``
of radius ``1 - 2 eps``.  Consecutive ``T`` points are close enough for
their chord to cut ``C'``, so that circle meets every ``T`` edge at some
``p``; with ``q`` the antipode of ``p`` the points ``r, p, l, q`` form a
rectangle (Thales).  Each choice of three edges gives a rectangle touching
a different set of polygon edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull

from .errors import ConstructionFailure
from .geometry import TOL, ConvexPolygon, contains, make_polygon
from .solution import RectangleSolution, from_xuv

B_X = 0.9
B_DROP = 1.05
MAX_RETRIES = 5
PROBE_SAMPLES = 9
PROBE_ARC = (math.radians(235.0), math.radians(305.0))


@dataclass(frozen=True)
class Circle:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")


@dataclass
class LowerBoundInstance:
    polygon: ConvexPolygon
    n: int
    eps: float
    groups: dict  # name -> vertex indices into polygon, in CCW order
    circleC: Circle
    circleCprime: Circle
    b_drop: float = B_DROP
    points: dict = field(default_factory=dict)  # name -> (n, 2) coordinates, in CCW order


@dataclass
class TripleReport:
    count: int
    total: int
    failures: list
    signatures: dict  # (iL, iR, iT) -> signature


def _group_points(n: int, eps: float):
    dtheta = math.radians(60.0) / (n - 1)
    tang = math.radians(60.0) + dtheta * np.arange(n)
    T = np.column_stack([np.cos(tang), np.sin(tang)])
    delta = math.asin(eps) * (np.arange(1, n + 1) / (n + 1))
    # CCW order: R from low to high angle (close to 360 deg), L from 180 deg downward
    R = np.column_stack([np.cos(-delta[::-1]), np.sin(-delta[::-1])])
    L = np.column_stack([np.cos(math.pi + delta), np.sin(math.pi + delta)])
    return T, L, R


def _circle_through(r: np.ndarray, l: np.ndarray) -> Circle:
    return Circle(0.5 * (r + l), 0.5 * float(np.hypot(*(r - l))))


def _probe_ok(P: ConvexPolygon, L: np.ndarray, R: np.ndarray) -> bool:
    """Lower arcs (antipodal to the T range) of sampled circles lie in ``P``."""
    ang = np.linspace(*PROBE_ARC, 15)
    dirs = np.column_stack([np.cos(ang), np.sin(ang)])
    for a in np.linspace(0.0, 1.0, 3):
        for iL in range(len(L) - 1):
            for iR in range(len(R) - 1):
                l = L[iL] + a * (L[iL + 1] - L[iL])
                r = R[iR] + a * (R[iR + 1] - R[iR])
                c = _circle_through(r, l)
                pts = c.center + c.radius * dirs
                if np.any(pts @ P.normals.T > P.offsets + TOL * P.scale):
                    return False
    return True


def generate(n: int) -> LowerBoundInstance:
    """Instance with ``3n + 2`` vertices; see the module docstring."""
    if n < 2:
        raise ValueError("n must be at least 2")
    dtheta = math.radians(60.0) / (n - 1)
    eps = (1.0 - math.cos(dtheta / 2)) / 4.0
    T, L, R = _group_points(n, eps)
    drop = B_DROP
    for _ in range(MAX_RETRIES + 1):
        B = np.array([[-B_X, -drop - eps], [B_X, -drop - eps]])
        pts = np.vstack([R, T, L, B])
        if len(ConvexHull(pts).vertices) == 3 * n + 2:
            P = make_polygon(pts)
            if _probe_ok(P, L, R):
                groups = {
                    "R": list(range(0, n)),
                    "T": list(range(n, 2 * n)),
                    "L": list(range(2 * n, 3 * n)),
                    "B": [3 * n, 3 * n + 1],
                }
                return LowerBoundInstance(
                    P, n, eps, groups,
                    Circle(np.zeros(2), 1.0), Circle(np.zeros(2), 1.0 - 2 * eps),
                    drop, {"T": T, "L": L, "R": R, "B": B},
                )
        drop = B_DROP + 2 * (drop - B_DROP) if drop > B_DROP else B_DROP + 0.05
    raise ConstructionFailure(f"could not place the bottom points for n={n}")


def _segment_circle(a: np.ndarray, b: np.ndarray, c: Circle) -> Optional[np.ndarray]:
    """First intersection of segment ``ab`` with circle ``c`` in the direction a -> b."""
    d = b - a
    f = a - c.center
    qa = float(d @ d)
    qb = 2.0 * float(f @ d)
    qc = float(f @ f) - c.radius**2
    disc = qb * qb - 4 * qa * qc
    if qa == 0.0 or disc < 0:
        return None
    sq = math.sqrt(disc)
    for lam in sorted(((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa))):
        if -1e-12 <= lam <= 1 + 1e-12:
            return a + min(max(lam, 0.0), 1.0) * d
    return None


def rectangle_for_triple(inst: LowerBoundInstance, iL: int, iR: int, iT: int, s: float = 0.5, t: float = 0.5) -> Optional[RectangleSolution]:
    """Rectangle ``r, p, l, q`` for the edges starting at ``L[iL]``, ``R[iR]``, ``T[iT]``; ``None`` if invalid."""
    L, R, T = inst.points["L"], inst.points["R"], inst.points["T"]
    r = R[iR] + s * (R[iR + 1] - R[iR])
    l = L[iL] + t * (L[iL + 1] - L[iL])
    return _rectangle(inst.polygon, r, l, T[iT], T[iT + 1], {"triple": (iL, iR, iT)})


def _rectangle(P, r, l, ta, tb, meta) -> Optional[RectangleSolution]:
    c = _circle_through(r, l)
    if c.radius <= TOL * P.scale:
        return None
    p = _segment_circle(ta, tb, c)
    if p is None:
        return None
    q = 2 * c.center - p
    corners = (r, p, l, q)
    if not all(contains(P, z, TOL) for z in corners):
        return None
    return from_xuv(r, p - r, q - r, "exact", P.scale, meta)


def edge_signature(P: ConvexPolygon, sol: RectangleSolution) -> tuple:
    """For each corner (in ``corners`` order) the sorted indices of polygon edges containing it."""
    V = P.vertices
    W = np.roll(V, -1, axis=0)
    tol = 1e-9 * P.scale
    sig = []
    for z in sol.corners:
        dist = np.abs(P.normals @ z - P.offsets)
        t = np.einsum("ij,ij->i", z - V, W - V) / np.einsum("ij,ij->i", W - V, W - V)
        on = (dist <= tol) & (t >= -1e-9) & (t <= 1 + 1e-9)
        sig.append(tuple(np.flatnonzero(on).tolist()))
    return tuple(sig)


def enumerate_triples(inst: LowerBoundInstance) -> TripleReport:
    m = inst.n - 1
    failures, sigs = [], {}
    for iL in range(m):
        for iR in range(m):
            for iT in range(m):
                sol = rectangle_for_triple(inst, iL, iR, iT)
                if sol is None:
                    failures.append((iL, iR, iT))
                else:
                    sigs[(iL, iR, iT)] = edge_signature(inst.polygon, sol)
    return TripleReport(len(sigs), m**3, failures, sigs)


def count_valid_triples(inst: LowerBoundInstance) -> int:
    """Number of edge triples (midpoint parameters) that yield a rectangle inside the polygon."""
    return enumerate_triples(inst).count


def upper_semicircle_samples(inst: LowerBoundInstance, pairs: int = 100, samples: int = 50, seed: int = 0) -> np.ndarray:
    """Distances from ``o`` of points on upper semicircles of random circles ``C_rl``."""
    rng = np.random.default_rng(seed)
    L, R = inst.points["L"], inst.points["R"]
    m = inst.n - 1
    out = []
    for _ in range(pairs):
        iL, iR = rng.integers(m), rng.integers(m)
        s, t = rng.uniform(0, 1, 2)
        r = R[iR] + s * (R[iR + 1] - R[iR])
        l = L[iL] + t * (L[iL + 1] - L[iL])
        c = _circle_through(r, l)
        # the arc from r counter-clockwise to l (the side facing T)
        a0 = math.atan2(*(r - c.center)[::-1])
        a1 = math.atan2(*(l - c.center)[::-1])
        if a1 < a0:
            a1 += 2 * math.pi
        ang = np.linspace(a0, a1, samples)
        pts = c.center + c.radius * np.column_stack([np.cos(ang), np.sin(ang)])
        out.append(np.hypot(pts[:, 0], pts[:, 1]))
    return np.concatenate(out)
