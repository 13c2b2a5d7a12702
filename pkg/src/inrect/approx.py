"""(1 - eps)-approximations through kernels.

The exact solver is run on an ``eps/32``-kernel (area) or an
``eps/16``-kernel (perimeter).  The kernel has ``O(eps^-1/2)`` vertices, so
the cost no longer depends on the size of ``P``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .exact import max_area_rectangle, max_perimeter_rectangle
from .geometry import diameter
from .kernel import _check_eps, eps_kernel
from .solution import RectangleSolution, canonicalize, from_xuv

AREA_SHRINK = 32
PERIMETER_SHRINK = 16


@dataclass
class ApproxReport:
    solution: RectangleSolution
    eps: float
    kernel_eps: float
    kernel_vertices: int
    guarantee: float


def _report(sol: RectangleSolution, eps: float, kr, kernel_ms: float) -> ApproxReport:
    meta = dict(sol.meta)
    meta["kernel_ms"] = kernel_ms
    meta["kernel_directions"] = kr.directions_used
    meta["kernel_worst_ratio"] = kr.worst_ratio
    sol = RectangleSolution(sol.x, sol.u, sol.v, sol.area, sol.perimeter, sol.degenerate, "approx", meta)
    return ApproxReport(sol, eps, kr.eps, kr.kernel.n, 1.0 - eps)


def approx_max_area(P, eps: float) -> ApproxReport:
    """Rectangle in ``P`` with area at least ``(1 - eps)`` times the optimum."""
    eps = _check_eps(eps)
    t0 = time.perf_counter()
    kr = eps_kernel(P, eps / AREA_SHRINK)
    t1 = time.perf_counter()
    sol = max_area_rectangle(kr.kernel)
    return _report(sol, eps, kr, 1e3 * (t1 - t0))


def approx_max_perimeter(P, eps: float) -> ApproxReport:
    """Rectangle in ``P`` with perimeter at least ``(1 - eps)`` times the optimum."""
    eps = _check_eps(eps)
    t0 = time.perf_counter()
    kr = eps_kernel(P, eps / PERIMETER_SHRINK)
    t1 = time.perf_counter()
    sol = max_perimeter_rectangle(kr.kernel)
    # cross-check against the longest segment of the kernel
    K = kr.kernel
    i, j, d = diameter(K)
    if 2 * d > sol.perimeter:
        p, q = K.vertices[i], K.vertices[j]
        seg = from_xuv(p, q - p, q * 0.0, "exact", K.scale, sol.meta)
        sol = canonicalize(seg)
    return _report(sol, eps, kr, 1e3 * (t1 - t0))
