"""Directional-width kernels of convex polygons.

An ``eps``-kernel of ``P`` is a convex subset ``K`` with
``w(u, K) >= (1 - eps) w(u, P)`` for every direction ``u``.  Kernels are
built by normalizing ``P`` to a fat position (diameter along the x-axis,
unit height) and keeping the extremal vertices in ``k`` uniformly spaced
directions.  Width ratios are affine invariant, so the kernel of the
normalized body maps back to a kernel of ``P``; since extremal points are
vertices of ``P`` the kernel is stored as a vertex subset of ``P`` and no
rounding is introduced by the round trip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegeneratePolygon, InvalidEps, KernelNotContained
from .geometry import TOL, ConvexPolygon, contains, diameter, extremal_point, make_polygon

MAX_DOUBLINGS = 3


@dataclass(frozen=True, eq=False)
class AffineMap:
    """``p -> linear @ p + translation``."""

    linear: np.ndarray
    translation: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float).reshape(2, 2)
        if abs(np.linalg.det(lin)) <= 1e-12:
            raise ValueError("affine map must be invertible")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float).reshape(2))

    def __call__(self, pts) -> np.ndarray:
        return np.asarray(pts, dtype=float) @ self.linear.T + self.translation

    @cached_property
    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    def apply_polygon(self, P: ConvexPolygon) -> ConvexPolygon:
        return P.transformed(self.linear, self.translation)


@dataclass
class KernelResult:
    kernel: ConvexPolygon
    eps: float
    directions_used: int
    normalization: AffineMap
    vertex_indices: np.ndarray
    worst_ratio: float


def normalize(P: ConvexPolygon) -> tuple[AffineMap, ConvexPolygon]:
    """Affine map sending the diameter pair to ``(-1, 0), (1, 0)`` with ``max |y| = 1``."""
    i, j, d = diameter(P)
    p, q = P.vertices[i], P.vertices[j]
    e = (q - p) / d
    mid = 0.5 * (p + q)
    R = np.array([[e[0], e[1]], [-e[1], e[0]]])
    y = (P.vertices - mid) @ R[1]
    h = float(np.abs(y).max())
    if h <= TOL * P.scale:
        raise DegeneratePolygon("polygon has zero width")
    lin = np.diag([2.0 / d, 1.0 / h]) @ R
    phi = AffineMap(lin, -lin @ mid)
    return phi, phi.apply_polygon(P)


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps < 1.0) or not math.isfinite(eps):
        raise InvalidEps(f"eps must lie in (0, 1), got {eps!r}")
    return eps


def _widths(V: np.ndarray, U: np.ndarray) -> np.ndarray:
    s = V @ U.T
    return s.max(axis=0) - s.min(axis=0)


def _unit_directions(m: int) -> np.ndarray:
    t = np.pi * np.arange(m) / m  # width is even in u
    return np.column_stack([np.cos(t), np.sin(t)])


def min_width_ratio(P: ConvexPolygon, K: ConvexPolygon) -> float:
    """Exact ``min_u w(u, K) / w(u, P)``.

    Between consecutive edge-normal directions of the two polygons both
    widths are of the form ``<u, a>``, and a ratio of two such sinusoids is
    monotone, so the minimum is attained at one of those directions.
    """
    U = np.vstack([P.normals, K.normals])
    return float(np.min(_widths(K.vertices, U) / _widths(P.vertices, U)))


def verify_kernel(P: ConvexPolygon, K: ConvexPolygon, eps: float, m: int = 10_000) -> float:
    """Smallest width ratio of ``K`` to ``P`` over ``m`` uniformly spaced directions.

    ``K`` passes as an ``eps``-kernel when the result is at least ``1 - eps``.
    """
    if m < 1:
        raise ValueError("m must be positive")
    for p in K.vertices:
        if not contains(P, p, TOL):
            raise KernelNotContained(f"kernel vertex {p.tolist()} is outside the polygon")
    U = _unit_directions(m)
    return float(np.min(_widths(K.vertices, U) / _widths(P.vertices, U)))


def _sample(Pn: ConvexPolygon, k: int) -> np.ndarray:
    t = 2 * np.pi * np.arange(k) / k
    idx = {extremal_point(Pn, (math.cos(a), math.sin(a)))[0] for a in t}
    return np.array(sorted(idx), dtype=np.intp)


def eps_kernel(P: ConvexPolygon, eps: float) -> KernelResult:
    """``eps``-kernel of ``P`` from extremal vertices in ``ceil(2 pi / sqrt(eps))`` directions.

    The result is checked on ``4k`` probe directions and at the exact
    breakpoint directions; on failure ``k`` is doubled (at most three times).
    """
    eps = _check_eps(eps)
    phi, Pn = normalize(P)
    k = int(math.ceil(2 * math.pi / math.sqrt(eps)))
    for _ in range(MAX_DOUBLINGS + 1):
        idx = _sample(Pn, k)
        if len(idx) >= 3:
            K = make_polygon(P.vertices[idx]) if len(idx) < P.n else P
            Kn = make_polygon(Pn.vertices[idx]) if len(idx) < P.n else Pn
            probe = verify_kernel(Pn, Kn, eps, 4 * k)
            worst = min(probe, min_width_ratio(Pn, Kn))
            if worst >= 1 - eps:
                return KernelResult(K, eps, k, phi, idx, worst)
        k *= 2
    raise DegeneratePolygon(f"kernel self-check failed after {MAX_DOUBLINGS} doublings")


def shrunk_rectangle(a: float, b: float, d: float, eps: float):
    """``[-a + d eps, a - d eps] x [-b + d eps, b - d eps]`` as ``(xlo, xhi, ylo, yhi)``, or ``None`` if empty."""
    r = d * eps
    if a < r or b < r:
        return None
    return (-a + r, a - r, -b + r, b - r)


def box_corners(box) -> np.ndarray:
    xlo, xhi, ylo, yhi = box
    return np.array([[xlo, ylo], [xhi, ylo], [xhi, yhi], [xlo, yhi]])
