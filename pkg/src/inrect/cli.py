"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 parse or validation error,
4 numerical failure.  Errors print a single line on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .approx import approx_max_area, approx_max_perimeter
from .errors import NumericalError, ValidationError
from .exact import clear_cache, max_area_rectangle, max_perimeter_rectangle
from .geometry import random_polygon, regular_polygon
from .kernel import eps_kernel, verify_kernel
from .lowerbound import enumerate_triples, generate
from .oracle import sweep
from .polyio import read_polygon, write_polygon
from .svg import emit_svg

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def threads_from_env() -> int:
    """Worker cap from ``INRECT_THREADS``; defaults to the available CPUs."""
    raw = os.environ.get("INRECT_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        k = int(raw)
    except ValueError:
        raise UsageError(f"INRECT_THREADS must be an integer >= 1, got {raw!r}") from None
    if k < 1:
        raise UsageError(f"INRECT_THREADS must be an integer >= 1, got {raw!r}")
    return k


def _positive_float(s: str) -> float:
    try:
        x = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {s!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"not finite: {s!r}")
    return x


def _int_list(s: str) -> list[int]:
    try:
        return [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def _float_list(s: str) -> list[float]:
    try:
        return [float(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="inrect", description="Largest rectangles inside convex polygons.")
    p.add_argument("--version", action="version", version=f"inrect {__version__}")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in outputs and used by generators")
    p.add_argument("--deterministic", action="store_true", help="report zero timings so outputs are byte-stable")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("solve", help="largest rectangle in a polygon file")
    s.add_argument("--input", required=True)
    s.add_argument("--objective", choices=("area", "perimeter"), default="area")
    s.add_argument("--mode", choices=("exact", "approx"), default="exact")
    s.add_argument("--eps", type=_positive_float)
    s.add_argument("--json", default="stdout", help="output path or 'stdout'")
    s.add_argument("--svg")

    g = sub.add_parser("gen", help="write a polygon file")
    g.add_argument("--kind", choices=("lowerbound", "regular", "random"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=None, dest="gen_seed")
    g.add_argument("--out", required=True)

    k = sub.add_parser("kernel", help="eps-kernel of a polygon file")
    k.add_argument("--input", required=True)
    k.add_argument("--eps", type=_positive_float, required=True)
    k.add_argument("--out", required=True)
    k.add_argument("--verify", type=int, metavar="M")

    o = sub.add_parser("oracle", help="orientation sweep (lower bound)")
    o.add_argument("--input", required=True)
    o.add_argument("--objective", choices=("area", "perimeter"), default="area")
    o.add_argument("--dtheta", type=_positive_float, default=1e-3)
    o.add_argument("--json", default="stdout")

    b = sub.add_parser("bench", help="timing and quality table (tab separated)")
    b.add_argument("--family", choices=("lowerbound", "regular"), required=True)
    b.add_argument("--n-list", type=_int_list, required=True)
    b.add_argument("--eps-list", type=_float_list, default=[])
    b.add_argument("--objective", choices=("area", "perimeter"), default="area")
    b.add_argument("--out", default="stdout")

    lb = sub.add_parser("lowerbound", help="cubic lower-bound family")
    lbs = lb.add_subparsers(dest="action", parser_class=_Parser)
    v = lbs.add_parser("verify", help="count valid edge triples")
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--json", default="stdout")
    return p


def _timings(meta: dict, deterministic: bool) -> dict:
    keys = ("build_ms", "triangulate_ms", "solve_ms")
    if deterministic:
        return {k: 0.0 for k in keys}
    return {k: round(float(meta.get(k, 0.0)), 3) for k in keys}


def _dump(obj: dict, dest: str) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if dest in ("stdout", "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


def solution_record(sol, objective, eps, kernel_eps, kernel_vertices, seed, deterministic) -> dict:
    return {
        "objective": objective,
        "method": sol.method,
        "eps": eps,
        "kernel_eps": kernel_eps,
        "corners": [[float(a), float(b)] for a, b in sol.corners],
        "area": float(sol.area),
        "perimeter": float(sol.perimeter),
        "degenerate": bool(sol.degenerate),
        "kernel_vertices": kernel_vertices,
        "timings": _timings(sol.meta, deterministic),
        "tool_version": __version__,
        "seed": seed,
    }


def cmd_solve(a) -> int:
    if a.mode == "approx" and a.eps is None:
        raise UsageError("--eps is required with --mode approx")
    if a.mode == "exact" and a.eps is not None:
        raise UsageError("--eps is only valid with --mode approx")
    P = read_polygon(a.input)
    if a.mode == "exact":
        sol = (max_area_rectangle if a.objective == "area" else max_perimeter_rectangle)(P)
        rec = solution_record(sol, a.objective, None, None, None, a.seed, a.deterministic)
    else:
        rep = (approx_max_area if a.objective == "area" else approx_max_perimeter)(P, a.eps)
        sol = rep.solution
        rec = solution_record(sol, a.objective, rep.eps, rep.kernel_eps, rep.kernel_vertices, a.seed, a.deterministic)
    _dump(rec, a.json)
    if a.svg:
        emit_svg(P, sol, a.svg)
    return EXIT_OK


def cmd_gen(a) -> int:
    if a.n < 2:
        raise UsageError("--n must be at least 2")
    seed = a.gen_seed if a.gen_seed is not None else a.seed
    if a.kind == "lowerbound":
        inst = generate(a.n)
        P, note = inst.polygon, f"lowerbound n={a.n} eps={inst.eps!r}"
    elif a.kind == "regular":
        if a.n < 3:
            raise UsageError("regular polygons need --n >= 3")
        P, note = regular_polygon(a.n), f"regular n={a.n}"
    else:
        if a.n < 3:
            raise UsageError("random polygons need --n >= 3")
        P, note = random_polygon(a.n, seed), f"random n={a.n} seed={seed}"
    write_polygon(a.out, P, note)
    return EXIT_OK


def cmd_kernel(a) -> int:
    P = read_polygon(a.input)
    kr = eps_kernel(P, a.eps)
    write_polygon(a.out, kr.kernel, f"eps-kernel eps={a.eps!r} directions={kr.directions_used}")
    rec = {"eps": a.eps, "kernel_vertices": kr.kernel.n, "directions_used": kr.directions_used, "seed": a.seed}
    if a.verify is not None:
        if a.verify < 1:
            raise UsageError("--verify needs a positive direction count")
        ratio = verify_kernel(P, kr.kernel, a.eps, a.verify)
        rec.update({"verify_directions": a.verify, "worst_ratio": ratio, "passed": bool(ratio >= 1 - a.eps)})
    _dump(rec, "stdout")
    return EXIT_OK


def cmd_oracle(a) -> int:
    P = read_polygon(a.input)
    t0 = time.perf_counter()
    res = sweep(P, a.dtheta, a.objective)
    ms = 0.0 if a.deterministic else round(1e3 * (time.perf_counter() - t0), 3)
    sol = res.best
    rec = {
        "objective": a.objective,
        "method": "oracle",
        "theta": res.theta,
        "dtheta": res.dtheta,
        "lower_bound": res.lower_bound,
        "corners": [[float(x), float(y)] for x, y in sol.corners],
        "area": sol.area,
        "perimeter": sol.perimeter,
        "degenerate": sol.degenerate,
        "timings": {"solve_ms": ms},
        "tool_version": __version__,
        "seed": a.seed,
    }
    _dump(rec, a.json)
    return EXIT_OK


def bench_rows(family: str, n_list, eps_list, objective: str, deterministic: bool = False):
    """Rows of the benchmark table: exact first, then one row per eps."""
    head = ["family", "n", "vertices", "mode", "eps", "objective", "value", "ratio", "kernel_vertices", "total_ms"]
    rows = [head]
    exact_fn = max_area_rectangle if objective == "area" else max_perimeter_rectangle
    approx_fn = approx_max_area if objective == "area" else approx_max_perimeter
    for n in n_list:
        P = generate(n).polygon if family == "lowerbound" else regular_polygon(n)
        clear_cache()
        t0 = time.perf_counter()
        ex = exact_fn(P)
        t_ex = time.perf_counter() - t0
        val = ex.area if objective == "area" else ex.perimeter
        rows.append([family, n, P.n, "exact", "", objective, val, 1.0, P.n, t_ex])
        for eps in eps_list:
            clear_cache()
            t0 = time.perf_counter()
            rep = approx_fn(P, eps)
            t_ap = time.perf_counter() - t0
            av = rep.solution.area if objective == "area" else rep.solution.perimeter
            rows.append([family, n, P.n, "approx", eps, objective, av, av / val, rep.kernel_vertices, t_ap])
    out = [head]
    for r in rows[1:]:
        r = list(r)
        r[-1] = 0.0 if deterministic else round(1e3 * r[-1], 3)
        out.append(r)
    return out


def cmd_bench(a) -> int:
    if not a.n_list:
        raise UsageError("--n-list is empty")
    rows = bench_rows(a.family, a.n_list, a.eps_list, a.objective, a.deterministic)
    text = "\n".join("\t".join(_cell(c) for c in r) for r in rows) + "\n"
    if a.out in ("stdout", "-"):
        sys.stdout.write(text)
    else:
        Path(a.out).write_text(text)
    return EXIT_OK


def _cell(c) -> str:
    if isinstance(c, float):
        return repr(c)
    return str(c)


def cmd_lowerbound(a) -> int:
    if a.action != "verify":
        raise UsageError("expected 'lowerbound verify'")
    if a.n < 2:
        raise UsageError("--n must be at least 2")
    inst = generate(a.n)
    rep = enumerate_triples(inst)
    sigs = list(rep.signatures.values())
    rec = {
        "n": a.n,
        "vertices": inst.polygon.n,
        "eps": inst.eps,
        "count": rep.count,
        "total": rep.total,
        "distinct_signatures": len(set(sigs)) == len(sigs),
        "failures": [list(t) for t in rep.failures],
        "tool_version": __version__,
        "seed": a.seed,
    }
    _dump(rec, a.json)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "gen": cmd_gen,
    "kernel": cmd_kernel,
    "oracle": cmd_oracle,
    "bench": cmd_bench,
    "lowerbound": cmd_lowerbound,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        threads_from_env()
        a = parser.parse_args(argv)
        if a.command is None:
            raise UsageError("missing subcommand")
        return COMMANDS[a.command](a)
    except UsageError as exc:
        print(f"inrect: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"inrect: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"inrect: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"inrect: i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except np.linalg.LinAlgError as exc:
        print(f"inrect: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
