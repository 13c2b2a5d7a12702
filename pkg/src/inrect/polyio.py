"""Plain-text polygon files.

Format::

    inrect-polygon v1
    # comments start with '#'
    0 0
    1 0
    1 1

One vertex per line as two decimal literals.  Writers use 17 significant
digits so that reading a written file gives back identical floats.
"""

from __future__ import annotations

import math
from pathlib import Path

from .errors import ValidationError
from .geometry import ConvexPolygon, make_polygon

HEADER = "inrect-polygon v1"


class PolygonFormatError(ValidationError):
    pass


def parse_polygon(text: str) -> ConvexPolygon:
    lines = text.splitlines()
    body = []
    seen_header = False
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise PolygonFormatError(f"line {lineno}: expected header {HEADER!r}")
            seen_header = True
            continue
        parts = line.split()
        if len(parts) != 2:
            raise PolygonFormatError(f"line {lineno}: expected two numbers, got {len(parts)} fields")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise PolygonFormatError(f"line {lineno}: not a decimal literal") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise PolygonFormatError(f"line {lineno}: non-finite coordinate")
        body.append((x, y))
    if not seen_header:
        raise PolygonFormatError(f"missing header {HEADER!r}")
    return make_polygon(body)


def read_polygon(path) -> ConvexPolygon:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise PolygonFormatError(f"cannot read {path}: {exc}") from exc
    return parse_polygon(text)


def format_polygon(P: ConvexPolygon, comment: str | None = None) -> str:
    out = [HEADER]
    if comment:
        out += [f"# {c}" for c in comment.splitlines()]
    out += [f"{x:.17g} {y:.17g}" for x, y in P.vertices]
    return "\n".join(out) + "\n"


def write_polygon(path, P: ConvexPolygon, comment: str | None = None) -> None:
    Path(path).write_text(format_polygon(P, comment))
