import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sdgkit.errors import DegenerateTriangle, InvalidInput
from sdgkit.geom_core import (
    Direction,
    angle_at,
    circumcenter,
    incircle,
    normalize_angle,
    orientation,
)

coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
point = st.tuples(coord, coord)
small = st.integers(-4, 4).map(float)
grid_point = st.tuples(small, small)


def frac_orient(a, b, c):
    a, b, c = ([Fraction(x) for x in p] for p in (a, b, c))
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def frac_incircle(a, b, c, d):
    rows = []
    for p in (a, b, c):
        x, y = Fraction(p[0]) - Fraction(d[0]), Fraction(p[1]) - Fraction(d[1])
        rows.append((x, y, x * x + y * y))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    v = a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)
    return (v > 0) - (v < 0)


# examples

def test_orientation_examples():
    assert orientation((0, 0), (1, 0), (0, 1)) == 1
    assert orientation((0, 0), (1, 0), (2, 0)) == 0
    assert orientation((0, 0), (1, 0), (0.5, -1e-12)) == -1


def test_orientation_rejects_nonfinite():
    with pytest.raises(InvalidInput):
        orientation((0, 0), (1, math.nan), (0, 1))
    with pytest.raises(InvalidInput):
        orientation((0, 0), (1, 0), (math.inf, 1))


def test_incircle_examples():
    a, b, c = (0, 0), (1, 0), (0, 1)
    assert incircle(a, b, c, (0.25, 0.25)) == 1
    assert incircle(a, b, c, (1, 1)) == 0
    assert incircle(a, b, c, (2, 2)) == -1


def test_incircle_collinear_triangle():
    with pytest.raises(DegenerateTriangle):
        incircle((0, 0), (1, 0), (2, 0), (5, 5))


def test_angle_at_examples():
    assert angle_at((1, 1), (0, 0), (2, 0)) == pytest.approx(math.pi / 2, abs=1e-15)
    assert angle_at((1, 2), (0, 0), (2, 0)) == pytest.approx(math.acos(3 / 5), abs=1e-12)
    assert angle_at((1, 0), (0, 0), (2, 0)) == pytest.approx(math.pi, abs=1e-15)
    with pytest.raises(InvalidInput):
        angle_at((0, 0), (0, 0), (1, 0))


def test_circumcenter():
    assert circumcenter((0, 0), (2, 0), (1, 2)) == pytest.approx((1, 0.75))
    with pytest.raises(DegenerateTriangle):
        circumcenter((0, 0), (1, 1), (2, 2))


def test_direction_rotation_convention():
    u = Direction(0.0)
    assert (u + math.pi / 2).angle == pytest.approx(3 * math.pi / 2)
    assert (u - math.pi / 2).angle == pytest.approx(math.pi / 2)
    assert normalize_angle(-1e-300) < 2 * math.pi


# properties

@given(point, point, point)
def test_orientation_antisymmetric(a, b, c):
    s = orientation(a, b, c)
    assert orientation(b, a, c) == -s
    assert orientation(a, c, b) == -s
    assert orientation(c, b, a) == -s
    assert s == frac_orient(a, b, c)


@given(grid_point, grid_point, grid_point, grid_point)
def test_incircle_permutation_parity(a, b, c, d):
    pts = [a, b, c, d]
    try:
        base = incircle(a, b, c, d)
    except DegenerateTriangle:
        return
    # even permutations keep the sign, odd ones flip it
    perms = {(1, 0, 3, 2): 1, (2, 3, 0, 1): 1, (1, 2, 0, 3): 1,
             (1, 0, 2, 3): -1, (0, 1, 3, 2): -1, (3, 1, 2, 0): -1}
    for perm, parity in perms.items():
        q = [pts[i] for i in perm]
        try:
            assert incircle(*q) == parity * base
        except DegenerateTriangle:
            pass


@given(point, point, point, st.floats(0, 2 * math.pi), coord, coord)
def test_angle_at_symmetry_and_invariance(r, p, q, theta, tx, ty):
    if len({r, p, q}) < 3 or r == p or r == q:
        return
    if min(math.dist(r, p), math.dist(r, q)) < 1e-3:
        return
    a = angle_at(r, p, q)
    assert a == angle_at(r, q, p)
    c, s = math.cos(theta), math.sin(theta)

    def move(z):
        return (c * z[0] - s * z[1] + tx, s * z[0] + c * z[1] + ty)

    assert angle_at(move(r), move(p), move(q)) == pytest.approx(a, abs=1e-9)


def test_incircle_matches_rational_oracle_on_near_degenerate_quadruples():
    """1e5 quadruples near a common circle, half of them snapped to exactly
    cocircular lattice points, checked against Fraction arithmetic."""
    gen = random.Random(7)
    lattice = [(3, 4), (4, 3), (-3, 4), (5, 0), (0, -5), (-4, -3), (3, -4), (-5, 0)]
    mismatches = 0
    for i in range(100_000):
        if i % 2:
            pts = gen.sample(lattice, 4)
            s = gen.choice([1.0, 0.5, 1e-3, 1024.0])
            quad = [(x * s + 0.25, y * s - 0.75) for x, y in pts]
            j = gen.randrange(4)
            eps = gen.choice([0.0, 2 ** -40, -(2 ** -40), 2 ** -52])
            quad[j] = (quad[j][0] + eps, quad[j][1])
        else:
            cx, cy, r = gen.uniform(-10, 10), gen.uniform(-10, 10), gen.uniform(0.1, 10)
            quad = []
            for _ in range(4):
                t = gen.uniform(0, 2 * math.pi)
                rr = r * (1 + gen.uniform(-1e-12, 1e-12))
                quad.append((cx + rr * math.cos(t), cy + rr * math.sin(t)))
        a, b, c, d = quad
        if frac_orient(a, b, c) == 0:
            continue
        if incircle(a, b, c, d) != frac_incircle(a, b, c, d):
            mismatches += 1
    assert mismatches == 0
