"""Rectangle programs restricted to a 6-simplex.

Inside a simplex with vertices ``z_0..z_6`` a point is ``sum l_i z_i`` with
barycentric weights ``l``.  The vectors ``u`` and ``v`` are linear in ``l``,
so the orthogonality constraint ``<u, v> = 0`` is a quadratic form and the
objectives are

* area:       ``|u|^2 |v|^2`` (quartic), reported as area squared,
* perimeter:  ``|u| + |v|``   (half the perimeter).

The maximum over the simplex is the best of the maxima over the relative
interiors of its 127 faces:

* vertices are feasible iff ``<u, v> = 0`` there;
* on an edge the constraint is a quadratic in one variable;
* faces with 3 or 4 vertices are searched for Lagrange points by damped
  Newton from 16 deterministic starts;
* a face whose image in (u, v)-space is affinely dependent, or whose affine
  hull passes through the origin, cannot hold an interior maximum: moving
  along the kernel (resp. scaling radially, both objectives being
  homogeneous) keeps the constraint and does not decrease the objective.
  Every face with 5 or more vertices falls under one of the two cases in
  R^4, so such faces are settled by their boundaries.

For the perimeter the non-smooth loci ``u = 0`` and ``v = 0`` are polytopes
on which the remaining norm is convex; their maxima are basic solutions
with at most three nonzero weights and are enumerated exactly.

Everything operates on stacks; ``solve_batch`` handles whole simplices and
the face-level functions are shared with :mod:`inrect.exact`, which
deduplicates faces across a triangulation.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from itertools import combinations
from typing import Optional

import numpy as np
from scipy.stats import qmc

from .errors import DegenerateSimplex

AREA = "area"
PERIMETER = "perimeter"

FACES = {k: np.array(list(combinations(range(7), k)), dtype=np.intp) for k in range(1, 8)}
N_STARTS = 16
MAX_ITER = 80
MAX_HALVINGS = 16
STEP_TOL = 1e-13
RES_TOL = 1e-11
Q_TOL = 1e-10  # |<u,v>| accepted as zero (coordinates normalized to unit scale)
BARY_TOL = 1e-9
RANK_TOL = 1e-11

_HALTON = qmc.Halton(d=4, scramble=False).random(N_STARTS + 1)[1:]


@dataclass
class OptResult:
    value: float
    argmax: Optional[np.ndarray]
    feasible: bool
    kkt_residual: float


def objective(kind: str, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    a = np.einsum("...i,...i->...", u, u)
    b = np.einsum("...i,...i->...", v, v)
    if kind == AREA:
        return a * b
    return np.sqrt(a) + np.sqrt(b)


def _sym(M):
    return 0.5 * (M + np.swapaxes(M, -1, -2))


def pair_matrices(W: np.ndarray):
    """Symmetric pair matrices of ``<u,v>`` and ``det(u,v)`` for point stacks ``(..., k, 6)``."""
    U, V = W[..., 2:4], W[..., 4:6]
    Q = _sym(np.einsum("...ik,...jk->...ij", U, V))
    D = _sym(U[..., :, None, 0] * V[..., None, :, 1] - U[..., :, None, 1] * V[..., None, :, 0])
    return Q, D


def _minimax(D: np.ndarray, Q: np.ndarray, iters: int = 30, span: float = 16.0) -> np.ndarray:
    """Approximately ``min_m max_j |D_j + m Q_j|`` per row.

    The function is convex in ``m``; golden-section search on ``[-span, span]``.
    Any ``m`` gives a valid bound, so inexactness only loosens it.
    """
    g = (math.sqrt(5.0) - 1.0) / 2.0

    def f(m):
        return np.abs(D + m[:, None] * Q).max(axis=1)

    lo = np.full(len(D), -span)
    hi = np.full(len(D), span)
    a, b = hi - g * (hi - lo), lo + g * (hi - lo)
    fa, fb = f(a), f(b)
    for _ in range(iters):
        left = fa < fb
        # left: keep [lo, b]; else keep [a, hi]
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
        na = np.where(left, hi - g * (hi - lo), b)
        nb = np.where(left, a, lo + g * (hi - lo))
        fn = f(np.where(left, na, nb))
        fa, fb = np.where(left, fn, fb), np.where(left, fa, fn)
        a, b = na, nb
    return np.minimum(np.minimum(fa, fb), np.abs(D).max(axis=1))


def upper_bounds(W: np.ndarray, kind: str, mu_search: bool = True) -> np.ndarray:
    """Upper bounds of the constrained maximum over the hulls of point stacks ``(m, k, 6)``.

    On the feasible set ``|u| |v| = |det(u, v) + m <u, v>|`` for any ``m``, and a
    quadratic form on a simplex is bounded by its largest pair entry.  The
    result is ``-inf`` where ``<u, v>`` is provably sign-constant.
    """
    m = len(W)
    if m == 0:
        return np.empty(0)
    U, V = W[..., 2:4], W[..., 4:6]
    Q, D = pair_matrices(W)
    Qf, Df = Q.reshape(m, -1), D.reshape(m, -1)
    infeasible = np.all(Qf > Q_TOL, axis=1) | np.all(Qf < -Q_TOL, axis=1)
    det_bound = _minimax(Df, Qf) if mu_search else np.abs(Df).max(axis=1)
    nu = np.linalg.norm(U, axis=-1).max(axis=-1)
    nv = np.linalg.norm(V, axis=-1).max(axis=-1)
    if kind == AREA:
        out = np.minimum(det_bound, nu * nv) ** 2
    else:
        s = np.minimum(np.linalg.norm(U + V, axis=-1).max(axis=-1), np.linalg.norm(U - V, axis=-1).max(axis=-1))
        out = np.minimum(np.sqrt(s**2 + 2 * det_bound), nu + nv)
    out[infeasible] = -np.inf
    return out


def redundant_faces(W: np.ndarray) -> np.ndarray:
    """True where the face ``(m, k, 6)`` cannot hold a maximum in its relative interior."""
    Y = W[..., 2:6]
    k = Y.shape[-2]
    if k >= 5 or len(W) == 0:
        return np.ones(len(W), dtype=bool)
    dif = Y[:, 1:] - Y[:, :1]
    sd = np.linalg.svd(dif, compute_uv=False)
    sy = np.linalg.svd(Y, compute_uv=False)
    ref = np.maximum(sy[:, 0], 1e-300)
    dependent = sd[:, -1] <= RANK_TOL * ref
    if k == 4:
        through_origin = sy[:, -1] <= RANK_TOL * ref
    else:
        through_origin = sy[:, k - 1] <= RANK_TOL * ref
    return dependent | through_origin


# ---------------------------------------------------------------- closed forms


def vertex_values(W: np.ndarray, kind: str):
    """Objective at points ``(m, 6)``; ``-inf`` where infeasible."""
    u, v = W[:, 2:4], W[:, 4:6]
    q = np.einsum("ij,ij->i", u, v)
    val = objective(kind, u, v)
    return np.where(np.abs(q) <= Q_TOL, val, -np.inf)


def edge_candidates(W: np.ndarray, kind: str):
    """Feasible points on segments ``(m, 2, 6)``.

    Returns ``(row, t, value)`` arrays where the point is ``(1-t) W[row,0] + t W[row,1]``.
    """
    U, V = W[..., 2:4], W[..., 4:6]
    Q = np.einsum("mik,mjk->mij", U, V)
    q00, q11, q01 = Q[:, 0, 0], Q[:, 1, 1], 0.5 * (Q[:, 0, 1] + Q[:, 1, 0])
    c0, c1, c2 = q00, 2 * (q01 - q00), q00 - 2 * q01 + q11
    flat = (np.abs(c0) <= Q_TOL) & (np.abs(c1) <= Q_TOL) & (np.abs(c2) <= Q_TOL)
    rows, ts = [], []
    with np.errstate(all="ignore"):
        lin = np.abs(c2) <= 1e-14 * (np.abs(c1) + np.abs(c0) + 1e-300)
        disc = c1 * c1 - 4 * c2 * c0
        sq = np.sqrt(np.maximum(disc, 0.0))
        qq = -0.5 * (c1 + np.copysign(sq, c1))
        r1 = np.where(lin, -c0 / c1, qq / c2)
        r2 = np.where(lin, np.nan, c0 / qq)
    for r in (r1, r2):
        ok = np.isfinite(r) & (r >= -BARY_TOL) & (r <= 1 + BARY_TOL) & ~flat & ((disc >= 0) | lin)
        rows.append(np.flatnonzero(ok))
        ts.append(np.clip(r[ok], 0.0, 1.0))
    if kind == AREA:
        # constraint identically zero along the edge: critical points of the quartic
        for m in np.flatnonzero(flat):
            du, dv = U[m, 1] - U[m, 0], V[m, 1] - V[m, 0]
            pu = np.polynomial.Polynomial([U[m, 0] @ U[m, 0], 2 * U[m, 0] @ du, du @ du])
            pv = np.polynomial.Polynomial([V[m, 0] @ V[m, 0], 2 * V[m, 0] @ dv, dv @ dv])
            for r in (pu * pv).deriv().roots():
                if abs(r.imag) < 1e-12 and 0.0 <= r.real <= 1.0:
                    rows.append(np.array([m]))
                    ts.append(np.array([r.real]))
    row = np.concatenate(rows)
    t = np.concatenate(ts)
    z = (1 - t)[:, None] * W[row, 0] + t[:, None] * W[row, 1]
    return row, t, vertex_values(z, kind)


def degenerate_candidates(W: np.ndarray, kind: str):
    """Best point with ``u = 0`` or ``v = 0`` in each simplex of ``(m, 7, 6)`` (perimeter only).

    Returns ``(value (m,), weights (m, 7))``.
    """
    m = len(W)
    best = np.full(m, -np.inf)
    lam_best = np.zeros((m, 7))
    if kind != PERIMETER:
        return best, lam_best
    for zero_slice in (slice(4, 6), slice(2, 4)):
        Zr = W[..., zero_slice]
        for k in (1, 2, 3):
            F = FACES[k]
            Zs = Zr[:, F]  # (m, nf, k, 2)
            A = np.concatenate([np.ones(Zs.shape[:2] + (1, k)), np.swapaxes(Zs, 2, 3)], axis=2)
            rhs = np.array([1.0, 0.0, 0.0])
            with np.errstate(all="ignore"):
                if k == 3:
                    det = np.linalg.det(A)
                    good = np.abs(det) > 1e-12
                    lam = np.full(A.shape[:2] + (3,), np.nan)
                    if good.any():
                        lam[good] = np.linalg.solve(A[good], np.broadcast_to(rhs, (int(good.sum()), 3))[..., None])[..., 0]
                else:
                    AT = np.swapaxes(A, 2, 3)
                    M = AT @ A + 1e-15 * np.eye(k)
                    lam = np.linalg.solve(M, (AT @ rhs)[..., None])[..., 0]
                resid = np.linalg.norm(np.einsum("mfik,mfk->mfi", A, np.nan_to_num(lam)) - rhs, axis=2)
            ok = np.isfinite(lam).all(axis=2) & (resid <= 1e-12) & np.all(lam >= -BARY_TOL, axis=2)
            sb, fb = np.nonzero(ok)
            if len(sb) == 0:
                continue
            lk = np.clip(lam[sb, fb], 0.0, None)
            lk = lk / lk.sum(axis=1, keepdims=True)
            lam7 = np.zeros((len(sb), 7))
            lam7[np.arange(len(sb))[:, None], F[fb]] = lk
            z = np.einsum("nk,nkj->nj", lam7, W[sb])
            val = np.linalg.norm(z[:, 2:4], axis=1) + np.linalg.norm(z[:, 4:6], axis=1)
            order = np.lexsort((-val, sb))
            first = order[np.r_[True, sb[order][1:] != sb[order][:-1]]]
            upd = val[first] > best[sb[first]]
            best[sb[first][upd]] = val[first][upd]
            lam_best[sb[first][upd]] = lam7[first][upd]
    return best, lam_best


# ---------------------------------------------------------------- Newton core


def _parts(Uk, Vk, lam):
    """``u, v`` and the gradients of ``|u|^2, |v|^2, <u,v>`` in the weights (all linear in ``lam``)."""
    u = np.matmul(lam[:, None, :], Uk)[:, 0]
    v = np.matmul(lam[:, None, :], Vk)[:, 0]
    Uu = np.matmul(Uk, u[:, :, None])[..., 0]
    Vv = np.matmul(Vk, v[:, :, None])[..., 0]
    gq = np.matmul(Uk, v[:, :, None])[..., 0] + np.matmul(Vk, u[:, :, None])[..., 0]
    return u, v, 2 * Uu, 2 * Vv, gq


def _residual(kind, lam, al, be, u, v, ga, gb, gq):
    """Lagrange residual from precomputed parts; any leading shape."""
    a = np.sum(u * u, axis=-1)
    b = np.sum(v * v, axis=-1)
    if kind == AREA:
        gf = b[..., None] * ga + a[..., None] * gb
    else:
        ra = np.sqrt(np.maximum(a, 1e-300))
        rb = np.sqrt(np.maximum(b, 1e-300))
        gf = ga / (2 * ra[..., None]) + gb / (2 * rb[..., None])
    return np.concatenate(
        [
            gf - al[..., None] - be[..., None] * gq,
            lam.sum(axis=-1, keepdims=True) - 1.0,
            np.sum(u * v, axis=-1, keepdims=True),
        ],
        axis=-1,
    )


def _kkt(kind, Uk, Vk, x, jacobian=True):
    """Residual (and Jacobian) of the face Lagrange system.

    Unknowns ``x = (l_1..l_k, alpha, beta)``; equations
    ``grad f - alpha 1 - beta grad q = 0``, ``sum l = 1``, ``q = 0``.
    """
    N, k, _ = Uk.shape
    lam, al, be = x[:, :k], x[:, k], x[:, k + 1]
    u, v, ga, gb, gq = _parts(Uk, Vk, lam)
    F = _residual(kind, lam, al, be, u, v, ga, gb, gq)
    if not jacobian:
        return F, None
    a = np.sum(u * u, axis=1)
    b = np.sum(v * v, axis=1)
    UT, VT = np.swapaxes(Uk, 1, 2), np.swapaxes(Vk, 1, 2)
    Ha = 2 * (Uk @ UT)
    Hb = 2 * (Vk @ VT)
    UV = Uk @ VT
    Hq = UV + np.swapaxes(UV, 1, 2)
    if kind == AREA:
        Hf = b[:, None, None] * Ha + a[:, None, None] * Hb
        Hf += ga[:, :, None] * gb[:, None, :] + gb[:, :, None] * ga[:, None, :]
    else:
        ra = np.sqrt(np.maximum(a, 1e-300))
        rb = np.sqrt(np.maximum(b, 1e-300))
        Hf = Ha / (2 * ra[:, None, None]) - ga[:, :, None] * ga[:, None, :] / (4 * ra[:, None, None] ** 3)
        Hf += Hb / (2 * rb[:, None, None]) - gb[:, :, None] * gb[:, None, :] / (4 * rb[:, None, None] ** 3)
    J = np.zeros((N, k + 2, k + 2))
    J[:, :k, :k] = Hf - be[:, None, None] * Hq
    J[:, :k, k] = -1.0
    J[:, :k, k + 1] = -gq
    J[:, k, :k] = 1.0
    J[:, k + 1, :k] = gq
    return F, J


def _multipliers(kind, Uk, Vk, lam):
    """Least-squares ``(alpha, beta)`` for fixed weights."""
    N, k, _ = Uk.shape
    x = np.concatenate([lam, np.zeros((N, 2))], axis=1)
    F, _ = _kkt(kind, Uk, Vk, x, jacobian=False)
    gf = F[:, :k]
    gq = _parts(Uk, Vk, lam)[4]
    G = np.stack([np.ones_like(gf), gq], axis=2)
    M = np.swapaxes(G, 1, 2) @ G + 1e-12 * np.eye(2)
    r = np.matmul(gf[:, None, :], G)[:, 0]
    return np.linalg.solve(M, r[..., None])[..., 0]


def newton(kind: str, Uk: np.ndarray, Vk: np.ndarray, lam0: np.ndarray):
    """Damped Newton on the face Lagrange systems, one row per start.

    Steps solve the Levenberg-regularized normal equations so rank-deficient
    Jacobians stay usable.  Backtracking tries the step lengths
    ``1, 1/2, ..., 2^-(MAX_HALVINGS-1)`` in one batch and keeps the longest
    one that decreases the residual norm; rows without such a step stop.
    Since ``u``, ``v`` and the constraint gradients are linear in the
    weights, trial residuals are formed from the current values plus
    ``alpha`` times their change along the step.
    Returns final weights and residual norms.
    """
    N, k, _ = Uk.shape
    x = np.concatenate([lam0, _multipliers(kind, Uk, Vk, lam0)], axis=1)
    res = np.full(N, np.inf)
    active = np.arange(N)
    eye = np.eye(k + 2)
    H = MAX_HALVINGS
    alphas = 0.5 ** np.arange(H)
    A3 = alphas[:, None, None]
    A2 = alphas[:, None]
    for _ in range(MAX_ITER):
        if len(active) == 0:
            break
        Ua, Va, xa = Uk[active], Vk[active], x[active]
        na = len(active)
        with np.errstate(all="ignore"):
            F, J = _kkt(kind, Ua, Va, xa)
        nF = np.linalg.norm(F, axis=1)
        res[active] = nF
        JT = np.swapaxes(J, 1, 2)
        M = JT @ J
        mu = 1e-14 * np.trace(M, axis1=1, axis2=2) / (k + 2) + 1e-300
        M += mu[:, None, None] * eye
        with np.errstate(all="ignore"):
            step = -np.linalg.solve(M, JT @ F[..., None])[..., 0]
            p0 = _parts(Ua, Va, xa[:, :k])
            dp = _parts(Ua, Va, np.nan_to_num(step[:, :k]))
            trial = xa[None] + A3 * step[None]
            Ft = _residual(
                kind,
                trial[..., :k],
                trial[..., k],
                trial[..., k + 1],
                *(p[None] + A3 * d[None] for p, d in zip(p0, dp)),
            )
        rt = np.linalg.norm(Ft, axis=2)
        good = rt <= (1 - 1e-4 * A2) * nF[None]
        good &= np.isfinite(rt)
        first = np.argmax(good, axis=0)
        accepted = good[first, np.arange(na)]
        acc = np.flatnonzero(accepted)
        x[active[acc]] = trial[first[acc], acc]
        res[active[acc]] = rt[first[acc], acc]
        slen = alphas[first] * np.linalg.norm(np.nan_to_num(step, nan=np.inf), axis=1)
        ra = res[active]
        done = ~accepted | ((slen < STEP_TOL) & (ra < RES_TOL)) | (ra < 1e-15)
        # rows that left the face far behind will not come back with a useful point
        lam = x[active, :k]
        done |= (lam.min(axis=1) < -1.0) | (lam.max(axis=1) > 2.0)
        active = active[~done]
    return x[:, :k], res


def _mix(h: np.ndarray) -> np.ndarray:
    h = h ^ (h >> np.uint64(30))
    h = h * np.uint64(0xBF58476D1CE4E5B9)
    h = h ^ (h >> np.uint64(27))
    h = h * np.uint64(0x94D049BB133111EB)
    return h ^ (h >> np.uint64(31))


def face_shifts(W: np.ndarray) -> np.ndarray:
    """Deterministic per-face shifts in [0,1)^4 from a hash of the face coordinates."""
    bits = np.ascontiguousarray(W, dtype=float).reshape(len(W), -1).view(np.uint64)
    h = np.full(len(W), np.uint64(0x9E3779B97F4A7C15))
    with np.errstate(over="ignore"):
        for j in range(bits.shape[1]):
            h = _mix(h ^ bits[:, j])
        out = []
        for _ in range(4):
            h = _mix(h + np.uint64(0x9E3779B97F4A7C15))
            out.append((h >> np.uint64(11)).astype(float) / 2.0**53)
    return np.stack(out, axis=1)


def face_starts(k: int, shifts: np.ndarray) -> np.ndarray:
    """Starts ``(m, 16, k)``: centroid, edge midpoints, Cranley-Patterson shifted Halton points."""
    m = len(shifts)
    fixed = [np.full(k, 1.0 / k)]
    for i, j in combinations(range(k), 2):
        mid = np.zeros(k)
        mid[i] = mid[j] = 0.5
        fixed.append(mid)
    nq = N_STARTS - len(fixed)
    h = (_HALTON[None, :nq, :k] + shifts[:, None, :k]) % 1.0
    e = -np.log(np.clip(h, 1e-12, 1.0))
    qr = e / e.sum(axis=2, keepdims=True)
    return np.concatenate([np.broadcast_to(np.array(fixed), (m, len(fixed), k)), qr], axis=1)


def face_candidates(W: np.ndarray, kind: str):
    """Best interior Lagrange point of each face ``(m, k, 6)`` with ``k`` in {3, 4}.

    Returns ``(value (m,), weights (m, k), residual (m,))``; value is ``-inf``
    where no feasible point was found.
    """
    m, k, _ = W.shape
    starts = face_starts(k, face_shifts(W)).reshape(m * N_STARTS, k)
    Uk = np.repeat(W[..., 2:4], N_STARTS, axis=0)
    Vk = np.repeat(W[..., 4:6], N_STARTS, axis=0)
    lam, res = newton(kind, Uk, Vk, starts)
    with np.errstate(all="ignore"):
        lam = np.where((lam < 0) & (lam >= -BARY_TOL), 0.0, lam)
        inside = np.isfinite(lam).all(axis=1) & np.all(lam >= 0, axis=1)
        lam = lam / np.where(inside, lam.sum(axis=1), 1.0)[:, None]
    u = np.einsum("nk,nkj->nj", lam, Uk)
    v = np.einsum("nk,nkj->nj", lam, Vk)
    q = np.einsum("nj,nj->n", u, v)
    with np.errstate(all="ignore"):
        val = np.where(inside & (np.abs(q) <= Q_TOL), objective(kind, u, v), -np.inf)
    val = np.where(np.isfinite(val), val, -np.inf).reshape(m, N_STARTS)
    pick = np.argmax(val, axis=1)
    rows = np.arange(m)
    return val[rows, pick], lam.reshape(m, N_STARTS, k)[rows, pick], res.reshape(m, N_STARTS)[rows, pick]


# ---------------------------------------------------------------- whole simplices


def solve_batch(Z: np.ndarray, kind: str):
    """Per-simplex maxima for a stack ``Z`` of shape ``(B, 7, 6)``.

    Returns ``(values, argmax (B, 6), kkt_residuals, feasible)``.  Values are
    area squared or half-perimeter; ``-inf`` marks infeasible simplices.
    """
    Z = np.asarray(Z, dtype=float)
    B = len(Z)
    cand_sid, cand_lam, cand_val, cand_res = [], [], [], []

    def add(sid, lam7, val, res):
        keep = np.isfinite(val)
        cand_sid.append(sid[keep])
        cand_lam.append(lam7[keep])
        cand_val.append(val[keep])
        cand_res.append(res[keep])

    vv = vertex_values(Z.reshape(-1, 6), kind).reshape(B, 7)
    sid, vi = np.nonzero(np.isfinite(vv))
    lam7 = np.zeros((len(sid), 7))
    lam7[np.arange(len(sid)), vi] = 1.0
    add(sid, lam7, vv[sid, vi], np.zeros(len(sid)))

    E = FACES[2]
    row, t, val = edge_candidates(Z[:, E].reshape(-1, 2, 6), kind)
    sid, eid = np.divmod(row, len(E))
    lam7 = np.zeros((len(row), 7))
    lam7[np.arange(len(row)), E[eid, 0]] = 1 - t
    lam7[np.arange(len(row)), E[eid, 1]] += t
    add(sid, lam7, val, np.zeros(len(row)))

    if kind == PERIMETER:
        dv, dl = degenerate_candidates(Z, kind)
        add(np.arange(B), dl, dv, np.zeros(B))

    for k in (3, 4):
        F = FACES[k]
        W = Z[:, F].reshape(-1, k, 6)
        live = ~redundant_faces(W) & np.isfinite(upper_bounds(W, kind, mu_search=False))
        idx = np.flatnonzero(live)
        if len(idx) == 0:
            continue
        val, lam, res = face_candidates(W[idx], kind)
        sid, fid = np.divmod(idx, len(F))
        lam7 = np.zeros((len(idx), 7))
        lam7[np.arange(len(idx))[:, None], F[fid]] = lam
        add(sid, lam7, val, res)

    sid = np.concatenate(cand_sid)
    lam7 = np.concatenate(cand_lam)
    val = np.concatenate(cand_val)
    res = np.concatenate(cand_res)
    values = np.full(B, -np.inf)
    argmax = np.full((B, 6), np.nan)
    resid = np.zeros(B)
    if len(sid):
        z = np.einsum("nk,nkj->nj", lam7, Z[sid])
        pick = best_per_group(sid, val, z)
        values[sid[pick]] = val[pick]
        argmax[sid[pick]] = z[pick]
        resid[sid[pick]] = res[pick]
    return values, argmax, resid, np.isfinite(values)


def best_per_group(group: np.ndarray, val: np.ndarray, z: np.ndarray, rel: float = 1e-12) -> np.ndarray:
    """Index of the best candidate per group; near-ties go to the lexicographically smallest ``z``."""
    top = np.full(group.max() + 1, -np.inf)
    np.maximum.at(top, group, val)
    near = np.flatnonzero(val >= top[group] - rel * np.abs(top[group]))
    order = near[np.lexsort(tuple(z[near].T[::-1]) + (group[near],))]
    g = group[order]
    return order[np.r_[True, g[1:] != g[:-1]]]


def _single(simplex, kind, allow_degenerate) -> OptResult:
    Z = np.asarray(getattr(simplex, "vertices", simplex), dtype=float)
    if Z.shape != (7, 6) or not np.all(np.isfinite(Z)):
        raise DegenerateSimplex("a 6-simplex needs 7 finite points in R^6")
    scale = float(np.linalg.norm(Z.max(axis=0) - Z.min(axis=0)))
    if scale == 0.0:
        raise DegenerateSimplex("all simplex vertices coincide")
    vol = abs(np.linalg.det(Z[1:] - Z[0])) / 720.0
    if vol <= 1e-12 * scale**6 and not allow_degenerate:
        raise DegenerateSimplex(f"simplex volume {vol:.3g} is below tolerance")
    val, arg, res, feas = solve_batch(Z[None] / scale, kind)
    if not feas[0]:
        return OptResult(0.0, None, False, 0.0)
    power = 4 if kind == AREA else 1
    return OptResult(float(val[0]) * scale**power, arg[0] * scale, True, float(res[0]))


def max_area_on_simplex(simplex, allow_degenerate: bool = False) -> OptResult:
    """Maximum of ``|u|^2 |v|^2`` over the simplex subject to ``<u, v> = 0``."""
    return _single(simplex, AREA, allow_degenerate)


def max_halfperimeter_on_simplex(simplex, allow_degenerate: bool = False) -> OptResult:
    """Maximum of ``|u| + |v|`` over the simplex subject to ``<u, v> = 0``."""
    return _single(simplex, PERIMETER, allow_degenerate)
