"""Rectangle solutions and their canonical form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TOL

METHODS = ("exact", "approx", "oracle")


@dataclass
class RectangleSolution:
    """Rectangle with corners ``x, x+u, x+u+v, x+v`` (``<u, v> = 0``)."""

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    area: float
    perimeter: float
    degenerate: bool
    method: str
    meta: dict = field(default_factory=dict)

    @property
    def corners(self) -> np.ndarray:
        """Corners in cyclic order, shape ``(4, 2)``."""
        return np.array([self.x, self.x + self.u, self.x + self.u + self.v, self.x + self.v])

    @property
    def z(self) -> np.ndarray:
        return np.concatenate([self.x, self.u, self.v])


def from_xuv(x, u, v, method: str, scale: float = 1.0, meta: dict | None = None) -> RectangleSolution:
    x, u, v = (np.asarray(a, dtype=float).copy() for a in (x, u, v))
    nu, nv = float(np.hypot(*u)), float(np.hypot(*v))
    degenerate = min(nu, nv) <= TOL * scale
    area = 0.0 if degenerate else nu * nv
    return RectangleSolution(x, u, v, area, 2.0 * (nu + nv), degenerate, method, dict(meta or {}))


def _lex_less(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    for p, q in zip(a, b):
        if p < q - tol:
            return True
        if p > q + tol:
            return False
    return False


def representations(x, u, v) -> list[np.ndarray]:
    """The 8 ``(x, u, v)`` tuples describing the same rectangle."""
    x, u, v = (np.asarray(a, dtype=float) for a in (x, u, v))
    out = []
    for cx, e1, e2 in ((x, u, v), (x + u, -u, v), (x + v, u, -v), (x + u + v, -u, -v)):
        out.append(np.concatenate([cx, e1, e2]))
        out.append(np.concatenate([cx, e2, e1]))
    return out


def canonicalize(sol: RectangleSolution, tol: float = TOL) -> RectangleSolution:
    """Representation whose ``(x, u, v)`` is lexicographically smallest.

    Coordinates closer than ``tol`` times the rectangle size compare equal so
    that rounding noise does not decide between symmetric corners.
    """
    reps = representations(sol.x, sol.u, sol.v)
    size = max(float(np.hypot(*sol.u)) + float(np.hypot(*sol.v)), 1e-300)
    best = reps[0]
    for r in reps[1:]:
        if _lex_less(r, best, tol * size):
            best = r
    return RectangleSolution(
        best[0:2].copy(), best[2:4].copy(), best[4:6].copy(),
        sol.area, sol.perimeter, sol.degenerate, sol.method, dict(sol.meta),
    )
