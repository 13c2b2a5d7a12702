"""Brute-force reference: best rectangle over a grid of orientations.

For a fixed orientation the problem is convex in ``(x1, x2, w, h)``:
maximize ``log w + log h`` (area) or ``w + h`` (perimeter) subject to the
four corners lying in the rotated polygon.  Both are solved for all grid
angles at once by a log-barrier Newton method, and the best grid angle is
refined by repeated zooming grids.  Every reported rectangle is strictly
feasible, so the result is a certified lower bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import TOL, ConvexPolygon, diameter, rotation
from .solution import RectangleSolution, from_xuv

AREA = "area"
PERIMETER = "perimeter"

_CORNER_AB = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
T_FINAL = 1e13
GRID_T_FINAL = 1e9  # ranking grid angles needs less accuracy than the reported value
T_FACTOR = 100.0
MAX_NEWTON = 50
REFINE_TOL = 1e-9
REFINE_POINTS = 33


@dataclass
class SweepResult:
    best: RectangleSolution
    theta: float
    dtheta: float
    lower_bound: bool = True


def _check_objective(objective: str) -> None:
    if objective not in (AREA, PERIMETER):
        raise ValueError(f"objective must be 'area' or 'perimeter', got {objective!r}")


def _batched(P: ConvexPolygon, thetas: np.ndarray, objective: str, t_final: float = T_FINAL):
    """Axis-aligned optimum in the frame rotated by each ``theta``.

    Returns ``(x, w, h)`` in the rotated frame, arrays of shape (B, 2), (B,), (B,).
    """
    thetas = np.asarray(thetas, dtype=float)
    B = len(thetas)
    c = P.centroid
    s = P.scale
    V = (P.vertices - c) / s
    n = P.n
    N0 = P.normals
    off = np.einsum("ij,ij->i", N0, V)
    # the rectangle axes are (cos t, sin t) and (-sin t, cos t); in that frame the normals are rotated by -t
    ct, st = np.cos(thetas), np.sin(thetas)
    N1 = ct[:, None] * N0[None, :, 0] + st[:, None] * N0[None, :, 1]
    N2 = -st[:, None] * N0[None, :, 0] + ct[:, None] * N0[None, :, 1]
    # G z <= off for z = (x1, x2, w, h), rows (edge, corner)
    G = np.zeros((B, n, 4, 4))
    G[..., 0] = N1[:, :, None]
    G[..., 1] = N2[:, :, None]
    G[..., 2] = N1[:, :, None] * _CORNER_AB[None, None, :, 0]
    G[..., 3] = N2[:, :, None] * _CORNER_AB[None, None, :, 1]
    G = G.reshape(B, 4 * n, 4)

    r = float(off.min())
    z = np.zeros((B, 4))
    z[:, 0] = z[:, 1] = -0.25 * r
    z[:, 2] = z[:, 3] = 0.5 * r
    area = objective == AREA

    def phi(Gr, zr, t):
        sl = off4 - np.einsum("bij,bj->bi", Gr, zr)
        w, h = zr[:, 2], zr[:, 3]
        bad = (sl <= 0).any(axis=1) | (w <= 0) | (h <= 0)
        with np.errstate(all="ignore"):
            coef = t + 1.0 if area else 1.0
            val = -np.log(sl).sum(axis=1) - coef * (np.log(w) + np.log(h))
            if not area:
                val -= t * (w + h)
        return np.where(bad, np.inf, val)

    off4 = np.repeat(off, 4)[None, :]
    t = 1.0
    while True:
        rows = np.arange(B)
        for _ in range(MAX_NEWTON):
            Gr, zr = G[rows], z[rows]
            sl = off4 - np.einsum("bij,bj->bi", Gr, zr)
            gi = 1.0 / sl
            Gs = Gr * gi[:, :, None]
            grad = Gs.sum(axis=1)
            H = np.swapaxes(Gs, 1, 2) @ Gs
            w, h = zr[:, 2], zr[:, 3]
            coef = t + 1.0 if area else 1.0
            if not area:
                grad[:, 2:] -= t
            grad[:, 2] -= coef / w
            grad[:, 3] -= coef / h
            H[:, 2, 2] += coef / w**2
            H[:, 3, 3] += coef / h**2
            H += (1e-15 * np.einsum("bii->b", H))[:, None, None] * np.eye(4)
            step = -np.linalg.solve(H, grad[..., None])[..., 0]
            dec = -np.einsum("bi,bi->b", grad, step)
            live = dec > 1e-10
            rows, Gr, zr, step, dec = rows[live], Gr[live], zr[live], step[live], dec[live]
            if len(rows) == 0:
                break
            f0 = phi(Gr, zr, t)
            alpha = np.ones(len(rows))
            ok = np.zeros(len(rows), dtype=bool)
            for _h in range(50):
                todo = np.flatnonzero(~ok)
                if len(todo) == 0:
                    break
                trial = zr[todo] + alpha[todo, None] * step[todo]
                ft = phi(Gr[todo], trial, t)
                good = ft <= f0[todo] - 0.25 * alpha[todo] * dec[todo] + 1e-13 * np.abs(f0[todo])
                ok[todo[good]] = True
                alpha[todo[~good]] *= 0.5
            z[rows[ok]] = zr[ok] + alpha[ok, None] * step[ok]
            rows = rows[ok]
            if len(rows) == 0:
                break
        if t >= t_final:
            break
        t *= T_FACTOR
    x = z[:, :2] * s
    return x, z[:, 2] * s, z[:, 3] * s, c, s


def _solutions(P, thetas, objective) -> list[RectangleSolution]:
    x, w, h, c, s = _batched(P, thetas, objective)
    out = []
    for i, t in enumerate(np.asarray(thetas, dtype=float)):
        R = rotation(float(t))
        e1, e2 = R[:, 0], R[:, 1]
        xo = c + x[i, 0] * e1 + x[i, 1] * e2
        out.append(from_xuv(xo, w[i] * e1, h[i] * e2, "oracle", P.scale, {"theta": float(t)}))
    return out


def _values(P, thetas, objective, t_final: float = T_FINAL) -> np.ndarray:
    x, w, h, _, _ = _batched(P, thetas, objective, t_final)
    return w * h if objective == AREA else 2 * (w + h)


def fixed_orientation_best(P: ConvexPolygon, theta: float, objective: str = AREA) -> RectangleSolution:
    """Best rectangle with sides along ``(cos theta, sin theta)`` and its normal."""
    _check_objective(objective)
    return _solutions(P, np.array([theta]), objective)[0]


def sweep(P: ConvexPolygon, dtheta: float = 1e-3, objective: str = AREA, refine: bool = True) -> SweepResult:
    """Best fixed-orientation rectangle over a grid on ``[0, pi/2)``, then zooming refinement to ``1e-9`` rad."""
    _check_objective(objective)
    if not dtheta > 0:
        raise ValueError("dtheta must be positive")
    # step exactly dtheta so that halving dtheta refines the grid
    grid = np.arange(0.0, math.pi / 2, dtheta)
    m = len(grid)
    vals = np.concatenate([_values(P, grid[i : i + 4096], objective, GRID_T_FINAL) for i in range(0, m, 4096)])
    k = int(np.argmax(vals))
    theta = float(grid[k])
    if refine and m > 1:
        # zoom: a batched grid around the incumbent, shrinking the bracket each round
        half = dtheta
        best_val = -math.inf  # the first round contains theta itself
        while half > REFINE_TOL:
            cand = theta + np.linspace(-half, half, REFINE_POINTS)
            cv = _values(P, cand, objective)
            j = int(np.argmax(cv))
            if cv[j] > best_val:
                best_val, theta = float(cv[j]), float(cand[j])
            half = 2 * half / (REFINE_POINTS - 1)
    best = fixed_orientation_best(P, theta, objective)
    if objective == PERIMETER:
        # the value has a kink at the diameter direction; test it exactly
        i, j, _ = diameter(P)
        dv = P.vertices[j] - P.vertices[i]
        seg = fixed_orientation_best(P, math.atan2(dv[1], dv[0]) % (math.pi / 2), objective)
        if seg.perimeter > best.perimeter:
            best, theta = seg, seg.meta["theta"]
    best.meta["theta"] = theta % (math.pi / 2)
    return SweepResult(best, theta % (math.pi / 2), dtheta, True)
