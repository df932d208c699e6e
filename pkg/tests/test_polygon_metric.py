import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from conftest import uniform_points
from sdgkit.errors import GeneralPositionViolation, InvalidInput
from sdgkit.euclid_delaunay import euclid_radii
from sdgkit.geom_core import wrap_pi
from sdgkit.polygon_metric import (
    RegularKGon,
    bisector_diamond,
    breakpoint_count,
    diamond_radii,
    dq_distance,
    neighbor_table_diamond,
    phi_diamond,
)
from sdgkit.stable_graph import cyclic_runs

even_k = st.sampled_from([8, 10, 16, 24, 32, 64])
unit = st.floats(-1.0, 1.0, allow_nan=False)


def bisect_phi(p, q, j, Q, hi=1e6):
    """Smallest lam whose v_j-placement at p contains q, by bisection on
    the membership test (placements at a fixed vertex are nested)."""
    p, q = np.asarray(p, float), np.asarray(q, float)

    def inside(lam):
        c = p + lam * Q.directions[j]
        return dq_distance(Q, c, q) <= lam

    if not inside(hi):
        return None
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return hi


def test_regular_kgon_geometry():
    Q = RegularKGon(16, 0.3)
    assert np.allclose(np.linalg.norm(Q.vertices, axis=1), 1.0)
    assert Q.inradius == pytest.approx(math.cos(math.pi / 16))
    ang = np.diff(np.unwrap(Q.direction_angles))
    assert np.allclose(ang, -2 * math.pi / 16)
    assert np.allclose(Q.vertices, -Q.directions)
    with pytest.raises(InvalidInput):
        RegularKGon(7)
    with pytest.raises(InvalidInput):
        RegularKGon(6)


def test_dq_distance_examples():
    for k in (8, 16, 64):
        Q = RegularKGon(k, 0.1)
        assert dq_distance(Q, (0, 0), Q.vertices[3]) == pytest.approx(1.0)
        mid = (Q.vertices[0] + Q.vertices[1]) / 2
        mid /= np.linalg.norm(mid)
        assert dq_distance(Q, (0, 0), mid) == pytest.approx(1 / math.cos(math.pi / k))


@given(even_k, unit, unit, unit, unit)
def test_dq_distance_symmetric_for_even_k(k, a, b, c, d):
    Q = RegularKGon(k)
    assert dq_distance(Q, (a, b), (c, d)) == pytest.approx(dq_distance(Q, (c, d), (a, b)), abs=1e-12)


@pytest.mark.parametrize("k", [8, 16, 32, 64])
def test_phi_diamond_axis_example(k):
    assert phi_diamond((0, 0), (2, 0), 0, RegularKGon(k)) == pytest.approx(1.0)


def test_phi_diamond_perpendicular_is_absent():
    Q = RegularKGon(8)
    # u_6 is +y, at angle pi/2 to pq
    assert phi_diamond((0, 0), (2, 0), 6, Q) is None


def test_phi_diamond_45_degrees_matches_bisection():
    Q = RegularKGon(8)
    j = 7  # u_7 at +45 degrees
    lam = phi_diamond((0, 0), (2, 0), j, Q)
    assert lam == pytest.approx(bisect_phi((0, 0), (2, 0), j, Q), abs=1e-9)


def test_phi_diamond_parallel_edge_rejected():
    Q = RegularKGon(8)
    psi = math.pi / 2 - math.pi / 8
    d = (math.cos(psi), math.sin(psi))
    with pytest.raises(GeneralPositionViolation):
        phi_diamond((0, 0), d, 0, Q)


@given(even_k, st.floats(0, 2 * math.pi), unit, unit, st.integers(0, 63))
def test_phi_diamond_matches_bisection_oracle(k, off, x, y, j):
    assume(math.hypot(x, y) > 1e-3)
    Q = RegularKGon(k, off)
    j %= k
    try:
        lam = phi_diamond((0, 0), (x, y), j, Q)
    except GeneralPositionViolation:
        return
    ref = bisect_phi((0, 0), (x, y), j, Q)
    if lam is None:
        assert ref is None or ref > 1e5
    else:
        assert lam == pytest.approx(ref, rel=1e-9, abs=1e-12)


@given(st.integers(0, 10_000), even_k)
def test_vectorized_radii_match_scalar(seed, k):
    pts = uniform_points(seed, 5)
    Q = RegularKGon(k, 0.05)
    R = diamond_radii(pts, Q)
    for p in range(5):
        for q in range(5):
            if p == q:
                continue
            for j in range(k):
                lam = phi_diamond(pts[p], pts[q], j, Q)
                if lam is None:
                    assert not np.isfinite(R[p, q, j])
                else:
                    assert R[p, q, j] == pytest.approx(lam, rel=1e-12)


@given(st.integers(0, 10_000), even_k)
def test_finiteness_windows_and_domination(seed, k):
    pts = uniform_points(seed, 6)
    Q = RegularKGon(k, 0.01)
    R = diamond_radii(pts, Q)
    E = euclid_radii(pts, Q.direction_angles)
    d = pts[None, :, :] - pts[:, None, :]
    psi = np.abs(wrap_pi(np.arctan2(d[..., 1], d[..., 0])[..., None] - Q.direction_angles))
    off = ~np.eye(6, dtype=bool)[..., None] & np.ones(k, bool)
    margin = 1e-9
    assert np.all(np.isfinite(E[off & (psi < math.pi / 2 - margin)]))
    assert not np.any(np.isfinite(E[off & (psi > math.pi / 2 + margin)]))
    lim = math.pi / 2 - math.pi / k
    assert np.all(np.isfinite(R[off & (psi < lim - margin)]))
    assert not np.any(np.isfinite(R[off & (psi > lim + margin)]))
    fin = np.isfinite(R)
    assert np.all(E[fin] <= R[fin] * (1 + 1e-12))


@given(st.integers(0, 10_000), even_k)
def test_diamond_hit_sets_are_contiguous(seed, k):
    pts = uniform_points(seed, 25)
    t = neighbor_table_diamond(pts, RegularKGon(k, 0.013))
    for p, q in t.hit_counts():
        assert len(cyclic_runs(t.hits(p, q))) == 1


def test_two_point_table_and_counts():
    pts = np.array([(0.0, 0.0), (2.0, 0.7)])
    for k in (8, 16, 32):
        Q = RegularKGon(k)
        t = neighbor_table_diamond(pts, Q)
        for p, q in ((0, 1), (1, 0)):
            for j in range(k):
                lam = phi_diamond(pts[p], pts[q], j, Q)
                assert t.neighbor_of(p, j) == (None if lam is None else q)
            assert int(t.hits(p, q).sum()) == k // 2 - 1


def test_three_point_diamond_example():
    t = neighbor_table_diamond([(0, 0), (2, 0), (0, 2)], RegularKGon(16, 0.01))
    assert t.neighbor_of(0, 0) == 1


def test_breakpoint_count_examples():
    Q = RegularKGon(16)
    pts = [(0.0, 0.0), (2.0, 0.7)]
    assert breakpoint_count(pts, 0, 1, Q) == (7, 7)
    # a point in the middle of pq lies in every homothet touching both
    blocked = pts + [(1.0, 0.35 + 1e-7)]
    assert sum(breakpoint_count(blocked, 0, 1, Q)) == 0


@pytest.mark.parametrize("k", [8, 16, 32, 64])
def test_bisector_breakpoints_alternate(k):
    rng = np.random.default_rng(k)
    for _ in range(20):
        p, q = rng.random(2), rng.random(2)
        ch = bisector_diamond(p, q, RegularKGon(k))
        assert len(ch.breakpoints) == k - 2
        assert ch.alternates


@given(even_k, st.floats(0, 1), unit, unit)
def test_bisector_centers_are_equidistant_and_monotone(k, off, x, y):
    assume(math.hypot(x, y) > 1e-2)
    Q = RegularKGon(k, off)
    p, q = np.zeros(2), np.array([x, y])
    try:
        ch = bisector_diamond(p, q, Q)
    except GeneralPositionViolation:
        return
    for b in ch.breakpoints:
        dp, dq = dq_distance(Q, b.center, p), dq_distance(Q, b.center, q)
        assert dp == pytest.approx(dq, rel=1e-9, abs=1e-9)
        assert dp == pytest.approx(b.scale, rel=1e-9)
    perp = np.array([-y, x])
    proj = [float(np.dot(b.center, perp)) for b in ch.breakpoints]
    assert all(a < b for a, b in zip(proj, proj[1:]))


def test_bisector_rejects_parallel_pair():
    with pytest.raises(GeneralPositionViolation):
        bisector_diamond((0, 0), (2, 0), RegularKGon(8))


@given(even_k, st.floats(0, 2 * math.pi), unit, unit, st.integers(0, 63))
def test_long_run_homothet_inside_two_disks(k, off, x, y, j):
    """Q_j lies in the union of the disks D_{j-1} and D_{j+1} through p, q."""
    Q = RegularKGon(k, off)
    j %= k
    p, q = np.zeros(2), np.array([x, y])
    assume(np.linalg.norm(q) > 1e-3)
    try:
        lam = phi_diamond(p, q, j, Q)
    except GeneralPositionViolation:
        return
    disks = []
    for jj in (j - 1, (j + 1) % k):
        u = Q.directions[jj]
        dot = float(q @ u)
        if dot <= 0:
            return
        r = float(q @ q) / (2 * dot)
        disks.append((p + r * u, r))
    if lam is None:
        return
    V = p + lam * Q.directions[j] + lam * Q.vertices
    inside = np.zeros(len(V), bool)
    for c, r in disks:
        inside |= np.linalg.norm(V - c, axis=1) <= r * (1 + 1e-9)
    assert inside.all()
