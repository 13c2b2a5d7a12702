"""Kernel size and quality against eps for a dense regular polygon.

    python scripts/kernel_sizes.py --n 4096 --eps-list 0.1,0.01,0.001
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from inrect.geometry import regular_polygon
from inrect.kernel import eps_kernel, min_width_ratio, verify_kernel


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--eps-list", default="0.1,0.03,0.01,0.003,0.001")
    p.add_argument("--probes", type=int, default=10_000)
    a = p.parse_args(argv)
    P = regular_polygon(a.n)
    print("eps\tvertices\tc=n*sqrt(eps)\tprobe_ratio\texact_ratio\tdirections\tms")
    for e in (float(s) for s in a.eps_list.split(",")):
        t0 = time.perf_counter()
        kr = eps_kernel(P, e)
        ms = 1e3 * (time.perf_counter() - t0)
        K = kr.kernel
        print(f"{e:g}\t{K.n}\t{K.n * math.sqrt(e):.3f}\t{verify_kernel(P, K, e, a.probes):.6f}\t"
              f"{min_width_ratio(P, K):.6f}\t{kr.directions_used}\t{ms:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
