"""Wall-time scaling of the exact and approximate solvers.

Prints a tab-separated table and the fitted log-log slopes.

    python scripts/bench_scaling.py --n-list 6,12,16,24 --eps-list 0.1,0.05,0.025
"""

from __future__ import annotations

import argparse
import math
import sys
import time

import numpy as np

from inrect.approx import approx_max_area, approx_max_perimeter
from inrect.exact import clear_cache, max_area_rectangle, max_perimeter_rectangle
from inrect.geometry import make_polygon, random_polygon, regular_polygon
from inrect.kernel import eps_kernel


def arc_box(m: int = 12, span_deg: float = 20.0, R: float = 4.0):
    """Box whose top is a shallow arc; its kernel grows as eps shrinks."""
    t = math.pi / 2 + np.linspace(-1, 1, m) * math.radians(span_deg) / 2
    top = np.column_stack([R * np.cos(t), R * np.sin(t) - R + 1.0])
    return make_polygon(list(map(tuple, top)) + [(top[-1, 0], -1.0), (top[0, 0], -1.0)])


def timed(fn, repeats: int) -> float:
    best = math.inf
    for _ in range(repeats):
        clear_cache()
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--family", choices=("regular", "random"), default="regular")
    p.add_argument("--n-list", default="6,12,24")
    p.add_argument("--eps-list", default="0.1,0.05,0.025")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args(argv)
    ns = [int(s) for s in a.n_list.split(",")]
    eps_list = [float(s) for s in a.eps_list.split(",")]

    print("solver\tparam\tvertices\tkernel_area\tkernel_perimeter\tarea\tperimeter\tseconds")
    exact_t = []
    for n in ns:
        P = regular_polygon(n) if a.family == "regular" else random_polygon(n, a.seed)
        t = timed(lambda: (max_area_rectangle(P), max_perimeter_rectangle(P)), a.repeats)
        exact_t.append(t)
        ra, rp = max_area_rectangle(P), max_perimeter_rectangle(P)
        print(f"exact\t{n}\t{P.n}\t-\t-\t{ra.area:.12g}\t{rp.perimeter:.12g}\t{t:.3f}")
    P = arc_box()
    approx_t = []
    for e in eps_list:
        t = timed(lambda: (approx_max_area(P, e), approx_max_perimeter(P, e)), a.repeats)
        approx_t.append(t)
        ra, rp = approx_max_area(P, e), approx_max_perimeter(P, e)
        print(f"approx\t{e:g}\t{P.n}\t{ra.kernel_vertices}\t{rp.kernel_vertices}\t"
              f"{ra.solution.area:.12g}\t{rp.solution.perimeter:.12g}\t{t:.3f}")
    if len(ns) > 1:
        print(f"# exact slope vs n: {slope(ns, exact_t):.3f}")
    if len(eps_list) > 1:
        print(f"# approx slope vs 1/eps: {slope([1 / e for e in eps_list], approx_t):.3f}")
    print(f"# arc-box kernel sizes at eps/32: {[eps_kernel(P, e / 32).kernel.n for e in eps_list]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
