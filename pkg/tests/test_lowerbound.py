import math

import numpy as np
import pytest

from inrect.geometry import contains, make_polygon
from inrect.lowerbound import (
    _rectangle,
    count_valid_triples,
    enumerate_triples,
    generate,
    rectangle_for_triple,
    upper_semicircle_samples,
)


def _chord_distance(a, b):
    # distance from the origin to the segment ab
    d = b - a
    t = np.clip(-(a @ d) / (d @ d), 0, 1)
    return float(np.hypot(*(a + t * d)))


@pytest.mark.parametrize("n", [2, 3, 5, 10])
def test_instance_invariants(n):
    inst = generate(n)
    P = inst.polygon
    assert P.n == 3 * n + 2
    assert {k: len(v) for k, v in inst.groups.items()} == {"L": n, "R": n, "T": n, "B": 2}
    for g in ("L", "R"):
        pts = inst.points[g]
        assert np.allclose(np.hypot(pts[:, 0], pts[:, 1]), 1.0, atol=1e-12)
        assert np.all(pts[:, 1] <= 0) and np.all(pts[:, 1] >= -inst.eps)
    T = inst.points["T"]
    rp = inst.circleCprime.radius
    assert rp == pytest.approx(1 - 2 * inst.eps)
    assert all(_chord_distance(T[i], T[i + 1]) < rp for i in range(n - 1))
    # round trip through validation
    assert np.array_equal(make_polygon(P.vertices).vertices, P.vertices)


def test_n2_smallest():
    assert generate(2).polygon.n == 8


def test_n10_parameters():
    inst = generate(10)
    half = math.radians(60 / 9) / 2
    assert inst.polygon.n == 32
    assert inst.eps == pytest.approx((1 - math.cos(half)) / 4, rel=1e-15)
    # chord of half-angle delta sits at distance cos(delta) from the centre
    assert math.cos(half) < 1 - 2 * inst.eps


def test_rejects_small_n():
    with pytest.raises(ValueError):
        generate(1)


def test_triple_rectangle_n4():
    inst = generate(4)
    for iT in range(3):
        sol = rectangle_for_triple(inst, 1, 1, iT)
        assert sol is not None
        r, p, l, q = sol.corners
        assert abs((p - r) @ (p - l)) <= 1e-9
        assert abs(sol.u @ sol.v) <= 1e-9
        assert all(contains(inst.polygon, c, 1e-9) for c in sol.corners)


def test_degenerate_probe():
    inst = generate(4)
    r = inst.points["R"][0]
    T = inst.points["T"]
    assert _rectangle(inst.polygon, r, r.copy(), T[0], T[1], {}) is None


@pytest.mark.parametrize("n,count", [(4, 27), (8, 343)])
def test_counts(n, count):
    assert count_valid_triples(generate(n)) == count


def test_signatures_distinct():
    rep = enumerate_triples(generate(6))
    assert rep.count == rep.total == 125 and not rep.failures
    assert len(set(rep.signatures.values())) == rep.count


def test_upper_semicircle_between_circles():
    inst = generate(8)
    d = upper_semicircle_samples(inst, 100, 50, seed=3)
    assert len(d) == 5000
    assert d.min() >= 1 - 2 * inst.eps - 1e-12
    assert d.max() <= 1 + 1e-12
