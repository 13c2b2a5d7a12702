"""Independent reference computations used by the tests.

Nothing here reuses the solver code paths it is compared against: vertices
come from solving every 6-subset of constraints, volumes from rejection
sampling, simplex optima from dense feasible sampling.
"""

from __future__ import annotations

from itertools import combinations, islice

import numpy as np


def linear_scan_extremal(V: np.ndarray, u) -> int:
    s = V @ np.asarray(u, dtype=float)
    return int(np.flatnonzero(s >= s.max() - 1e-12 * max(1.0, abs(s.max())))[0])


def all_pairs_diameter(V: np.ndarray) -> float:
    d = V[:, None, :] - V[None, :, :]
    return float(np.sqrt((d**2).sum(-1)).max())


def constraint_matrix(V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``A z <= b`` for the parallelogram polytope, rebuilt from scratch."""
    n = len(V)
    rows, rhs = [], []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        e = b - a
        nv = np.array([e[1], -e[0]]) / np.hypot(*e)
        c = nv @ a
        for blocks in ((0,), (0, 1), (0, 2), (0, 1, 2)):
            r = np.zeros(6)
            for k in blocks:
                r[2 * k : 2 * k + 2] = nv
            rows.append(r)
            rhs.append(c)
    return np.array(rows), np.array(rhs)


def _cluster(Z: np.ndarray, radius: float) -> np.ndarray:
    reps: list[np.ndarray] = []
    for z in Z[np.lexsort(Z.T[::-1])]:
        if not reps or np.max(np.abs(z - reps[-1])) > radius:
            if all(np.max(np.abs(z - r)) > radius for r in reps):
                reps.append(z)
    return np.array(reps)


def brute_force_vertices(V: np.ndarray, tol: float = 1e-9, chunk: int = 20000) -> np.ndarray:
    """All vertices of the polytope by solving every 6-subset of constraints."""
    A, b = constraint_matrix(V)
    scale = float(np.hypot(*(V.max(0) - V.min(0))))
    found = []
    it = combinations(range(len(A)), 6)
    while True:
        block = np.array(list(islice(it, chunk)))
        if len(block) == 0:
            break
        M = A[block]
        ok = np.abs(np.linalg.det(M)) > 1e-10
        z = np.linalg.solve(M[ok], b[block][ok][..., None])[..., 0]
        feas = np.all(z @ A.T <= b + tol * scale, axis=1)
        found.append(z[feas])
    return _cluster(np.concatenate(found), 1e-7 * scale)


def monte_carlo_volume(V: np.ndarray, samples: int, seed: int) -> tuple[float, float]:
    """Volume estimate and its standard error by rejection sampling a box."""
    A, b = constraint_matrix(V)
    lo_x, hi_x = V.min(0), V.max(0)
    span = hi_x - lo_x
    lo = np.concatenate([lo_x, -span, -span])
    hi = np.concatenate([hi_x, span, span])
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left:
        m = min(left, 200_000)
        z = lo + (hi - lo) * rng.random((m, 6))
        hits += int(np.all(z @ A.T <= b, axis=1).sum())
        left -= m
    box = float(np.prod(hi - lo))
    p = hits / samples
    return box * p, box * np.sqrt(p * (1 - p) / samples)


def sampled_simplex_max(Z: np.ndarray, kind: str, samples: int, seed: int) -> float:
    """Best objective over random points of the simplex projected onto <u,v> = 0.

    Each barycentric sample is moved along the segment towards a second
    sample until the bilinear form changes sign, then bisected to zero.
    """
    rng = np.random.default_rng(seed)
    W1 = rng.dirichlet(np.ones(7), samples) @ Z
    W2 = rng.dirichlet(np.ones(7), samples) @ Z
    q = lambda W: np.einsum("ij,ij->i", W[:, 2:4], W[:, 4:6])
    q1, q2 = q(W1), q(W2)
    ok = q1 * q2 <= 0
    a, b = W1[ok], W2[ok]
    qa = q1[ok]
    for _ in range(60):
        m = 0.5 * (a + b)
        qm = q(m)
        left = np.sign(qm) == np.sign(qa)
        a = np.where(left[:, None], m, a)
        qa = np.where(left, qm, qa)
        b = np.where(left[:, None], b, m)
    W = 0.5 * (a + b)
    nu = np.hypot(W[:, 2], W[:, 3])
    nv = np.hypot(W[:, 4], W[:, 5])
    vals = (nu * nv) ** 2 if kind == "area" else nu + nv
    return float(vals.max()) if len(vals) else 0.0


def square_width_ratio_diamond(m: int) -> float:
    """Width ratio of the corner-midpoint diamond to the unit square, by formula."""
    t = np.pi * np.arange(m) / m
    c, s = np.abs(np.cos(t)), np.abs(np.sin(t))
    return float(np.min(np.maximum(c, s) / (c + s)))


def grid_rectangle_area(V: np.ndarray, w_grid: int = 201) -> float:
    """Axis-parallel max-area rectangle by a 2-D scan (for small test shapes)."""
    A, b = constraint_matrix(V)
    nv = A[::4, :2]
    c = b[::4]
    lo, hi = V.min(0), V.max(0)
    best = 0.0
    xs = np.linspace(lo[0], hi[0], w_grid)
    for i, x1 in enumerate(xs):
        for x2 in xs[i + 1 :]:
            # height interval allowed for the vertical strip [x1, x2]
            ylo, yhi = lo[1], hi[1]
            for n_, c_ in zip(nv, c):
                for x in (x1, x2):
                    if abs(n_[1]) < 1e-15:
                        if n_[0] * x > c_ + 1e-12:
                            ylo, yhi = 1.0, 0.0
                        continue
                    bound = (c_ - n_[0] * x) / n_[1]
                    if n_[1] > 0:
                        yhi = min(yhi, bound)
                    else:
                        ylo = max(ylo, bound)
            if yhi > ylo:
                best = max(best, (x2 - x1) * (yhi - ylo))
    return best
