"""Minimal deterministic SVG rendering of a polygon and a rectangle."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .geometry import ConvexPolygon
from .solution import RectangleSolution

PAD = 0.05


def _num(x: float) -> str:
    s = f"{x:.9g}"
    return "0" if s == "-0" else s


def _pts(P: np.ndarray) -> str:
    # SVG y grows downward
    return " ".join(f"{_num(x)},{_num(-y)}" for x, y in P)


def render_svg(P: ConvexPolygon, solution: RectangleSolution | None = None) -> str:
    lo, hi = P.vertices.min(axis=0), P.vertices.max(axis=0)
    w, h = hi - lo
    x0, y0 = lo[0] - PAD * w, -hi[1] - PAD * h
    vw, vh = w * (1 + 2 * PAD), h * (1 + 2 * PAD)
    sw = _num(0.004 * P.scale)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_num(x0)} {_num(y0)} {_num(vw)} {_num(vh)}">',
        f'  <polygon points="{_pts(P.vertices)}" fill="none" stroke="black" stroke-width="{sw}"/>',
    ]
    if solution is not None:
        if solution.degenerate:
            seg = np.array([solution.x, solution.x + solution.u + solution.v])
            lines.append(f'  <polyline points="{_pts(seg)}" fill="none" stroke="#1f77b4" stroke-width="{sw}"/>')
        else:
            lines.append(
                f'  <polygon points="{_pts(solution.corners)}" fill="#1f77b4" fill-opacity="0.4" '
                f'stroke="#1f77b4" stroke-width="{sw}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(P: ConvexPolygon, solution: RectangleSolution | None, path) -> None:
    Path(path).write_text(render_svg(P, solution))
