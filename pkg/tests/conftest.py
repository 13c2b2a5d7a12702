import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from inrect.geometry import make_polygon, random_polygon, regular_polygon  # noqa: E402

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]
RIGHT_TRIANGLE = [(0, 0), (4, 0), (0, 4)]
THIN_TRIANGLE = [(0, 0), (1, 0), (0.5, 0.01)]


@pytest.fixture
def square():
    return make_polygon(SQUARE)


@pytest.fixture
def right_triangle():
    return make_polygon(RIGHT_TRIANGLE)


@pytest.fixture
def thin_triangle():
    return make_polygon(THIN_TRIANGLE)


@pytest.fixture
def hexagon():
    return regular_polygon(6)


def polygons(min_n=3, max_n=12):
    """Seeded random convex polygons."""
    return st.builds(random_polygon, st.integers(min_n, max_n), st.integers(0, 10**6))


def unit_vectors():
    return st.floats(0, 2 * np.pi, allow_nan=False).map(lambda t: np.array([np.cos(t), np.sin(t)]))


# acceptance reporting

_ACCEPT = pytest.StashKey[list]()


@pytest.fixture
def accept(request):
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""
    lines = request.config.stash.setdefault(_ACCEPT, [])

    def record(k: int, ok: bool, detail: str) -> bool:
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        lines.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPT, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
