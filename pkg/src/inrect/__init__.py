"""Largest-area and largest-perimeter rectangles inside convex polygons."""

__version__ = "0.1.0"

from .approx import ApproxReport, approx_max_area, approx_max_perimeter
from .exact import max_area_rectangle, max_perimeter_rectangle
from .geometry import ConvexPolygon, make_polygon, random_polygon, regular_polygon
from .kernel import eps_kernel, verify_kernel
from .oracle import fixed_orientation_best, sweep
from .solution import RectangleSolution, canonicalize

__all__ = [
    "ApproxReport",
    "ConvexPolygon",
    "RectangleSolution",
    "approx_max_area",
    "approx_max_perimeter",
    "canonicalize",
    "eps_kernel",
    "fixed_orientation_best",
    "make_polygon",
    "max_area_rectangle",
    "max_perimeter_rectangle",
    "random_polygon",
    "regular_polygon",
    "sweep",
    "verify_kernel",
]
