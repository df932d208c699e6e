import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import uniform_points
from sdgkit.errors import GeneralPositionViolation, InvalidInput
from sdgkit.euclid_delaunay import build_delaunay, stability_angle
from sdgkit.generators import generate, isolated_vertex, perturbed_square, rng_gadget
from sdgkit.kinetic_sim import Trajectory, simulate
from sdgkit.polygon_metric import RegularKGon, breakpoint_count
from sdgkit.stable_graph import (
    beta_skeleton,
    closest_pair,
    cocircularity_avoidance_check,
    cyclic_runs,
    gabriel_graph,
    lemma_suite,
    lower_bound_check,
    rng,
    sdg_euclidean,
    sdg_proxy,
    stabilities,
    verify_sdg,
)

EQUI = [(0.0, 0.0), (1.0, 0.0), (0.5, math.sqrt(3) / 2)]


def _components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in edges:
        parent[find(p)] = find(q)
    return len({find(i) for i in range(n)})


# sdg_euclidean

def test_equilateral_all_stable():
    rep = sdg_euclidean(EQUI, math.pi / 2)
    assert rep.edge_set == {(0, 1), (0, 2), (1, 2)}
    assert all(e.stability == pytest.approx(2 * math.pi / 3) for e in rep.edges)


def test_grid_gadget_near_n_edges():
    for n in (40, 100):
        pts = generate("grid", n, 1)
        alpha = 0.1
        count = len(sdg_euclidean(pts, alpha).edges)
        assert count >= n * (1 - 6 * alpha / math.pi) - 2
        assert abs(count - n) <= 4


def test_perturbed_square_diagonal_excluded():
    pts = perturbed_square(1e-6)
    dt = build_delaunay(pts)
    rep = sdg_euclidean(pts, 0.01, dt)
    diag = {(0, 2), (1, 3)} & set(dt.edges)
    assert diag and not (diag & rep.edge_set)


def test_alpha_range():
    with pytest.raises(InvalidInput):
        sdg_euclidean(EQUI, 0.0)


@given(st.integers(0, 10_000), st.floats(0.01, 1.5), st.floats(0.01, 1.5))
def test_monotone_in_alpha(seed, a1, a2):
    a1, a2 = sorted((a1, a2))
    pts = uniform_points(seed, 40)
    dt = build_delaunay(pts)
    assert sdg_euclidean(pts, a2, dt).edge_set <= sdg_euclidean(pts, a1, dt).edge_set


# breakpoint proxy and verification

def test_proxy_two_points():
    # k = 16 is below the proxy's k >= 24 precondition, so the threshold is
    # applied to the raw breakpoint count
    pair = [(0.0, 0.0), (2.0, 0.7)]
    assert sum(breakpoint_count(pair, 0, 1, RegularKGon(16))) == 14 >= 11
    with pytest.raises(InvalidInput):
        sdg_proxy(pair + [(5.0, 9.0)], 16)
    rep = sdg_proxy(pair + [(40.0, 90.0)], 24)
    assert (0, 1) in rep.edge_set


@pytest.mark.parametrize("seed", range(3))
def test_proxy_sandwich_on_200_points(seed):
    pts = uniform_points(seed, 200)
    dt = build_delaunay(pts)
    k = 64
    alpha = 2 * math.pi / k
    proxy = sdg_proxy(pts, k, dt=dt)
    stab = stabilities(dt)
    assert all(stab.get((e.p, e.q), 0.0) >= alpha for e in proxy.edges)
    assert sdg_euclidean(pts, 8 * alpha, dt).edge_set <= proxy.edge_set
    rep = verify_sdg(pts, proxy.edge_set, alpha, 8 * alpha, dt)
    assert rep.passed


def test_verify_definitional_and_weak_diagonal():
    pts = uniform_points(4, 80)
    g = sdg_euclidean(pts, 0.3).edge_set
    assert verify_sdg(pts, g, 0.3, 0.3).passed
    sq = perturbed_square(1e-6)
    dt = build_delaunay(sq)
    rep = verify_sdg(sq, dt.edges, math.pi / 4, math.pi / 4)
    assert rep.s1_violations
    with pytest.raises(InvalidInput):
        verify_sdg(sq, [], 0.5, 0.1)


def test_verify_reports_missing_edges():
    pts = uniform_points(6, 50)
    rep = verify_sdg(pts, [], 0.1, 0.2)
    assert rep.s2_violations == sorted(sdg_euclidean(pts, 0.2).edge_set)


# proximity graphs

def test_beta_skeleton_examples():
    for beta in (1.0, 1.5, 2.0, 5.0):
        assert beta_skeleton([(0, 0), (1, 0.2)], beta) == {(0, 1)}
    assert (0, 1) not in beta_skeleton([(0, 0), (2, 0), (1, 0.9)], 2.0)
    with pytest.raises(InvalidInput):
        beta_skeleton([(0, 0), (1, 0)], 0.5)


@given(st.integers(0, 10_000), st.sampled_from([1.05, 1.2, 1.5, 2.0, 3.0]))
def test_skeleton_edges_are_stable(seed, beta):
    pts = uniform_points(seed, 40)
    dt = build_delaunay(pts)
    stab = stabilities(dt)
    bound = 2 * math.acos(1 / beta)
    for e in beta_skeleton(pts, beta):
        assert stab.get(e, 0.0) >= bound - 1e-9


def test_gabriel_contains_rng():
    pts = uniform_points(8, 60)
    assert rng(pts) <= gabriel_graph(pts) <= set(build_delaunay(pts).edges)


def test_closest_pair_examples():
    assert closest_pair([(0, 0), (1, 0), (5, 5)]) == (0, 1)
    with pytest.raises(InvalidInput):
        closest_pair([(0, 0)])
    with pytest.raises(GeneralPositionViolation):
        closest_pair([(0, 0), (1, 0), (2, 0.0), (9, 9)])


@pytest.mark.parametrize("seed", range(10))
def test_closest_pair_oracle_and_stability(seed):
    pts = uniform_points(seed, 100)
    best, pair = math.inf, None
    for i in range(100):
        for j in range(i + 1, 100):
            d = math.dist(pts[i], pts[j])
            if d < best:
                best, pair = d, (i, j)
    assert closest_pair(pts) == pair
    dt = build_delaunay(pts)
    assert dt.has_edge(*pair)
    assert stability_angle(dt, pair) >= math.pi / 3 - 1e-9


def test_rng_two_points_and_subset_of_dt():
    assert rng([(0, 0), (1, 0)]) == {(0, 1)}
    for seed in range(5):
        pts = uniform_points(seed, 60)
        assert rng(pts) <= set(build_delaunay(pts).edges)


def test_rng_gadget_edge_is_barely_stable():
    pts = rng_gadget(20, np.random.default_rng(0))
    dt = build_delaunay(pts)
    assert (0, 1) in rng(pts)
    assert stability_angle(dt, (0, 1)) < 0.05


def test_sdg_may_be_disconnected():
    pts = isolated_vertex(20, np.random.default_rng(0))
    rep = sdg_euclidean(pts, 0.5)
    assert not any(0 in (e.p, e.q) for e in rep.edges)
    assert _components(len(pts), rep.edge_set) > 1


# lower bound

def test_lower_bound_examples():
    assert lower_bound_check(uniform_points(0, 100), math.pi / 32)[2]
    count, bound, ok = lower_bound_check(generate("grid", 60, 0), 0.1)
    assert ok and abs(count - 60) <= 4
    # alpha = pi/2 is outside the checker's (0, pi/6) precondition; the
    # bound itself is negative there, so the count trivially clears it
    assert len(sdg_euclidean(EQUI, math.pi / 2).edges) == 3 >= 3 * (1 - 3) - 2
    with pytest.raises(InvalidInput):
        lower_bound_check(EQUI, math.pi / 2)


# lemma machinery

def test_cyclic_runs():
    assert cyclic_runs(np.array([1, 1, 0, 1, 0, 1], bool)) == [[3], [5, 0, 1]]
    assert cyclic_runs(np.ones(3, bool)) == [[0, 1, 2]]
    assert cyclic_runs(np.zeros(3, bool)) == []


@given(st.integers(0, 10_000), st.sampled_from([8, 16, 32, 64]))
def test_lemma_suite_clean_on_small_sets(seed, k):
    res = lemma_suite(uniform_points(seed, 40), k, offset=0.001)
    assert res.violations == 0


# cocircularity avoidance

def test_avoidance_check_static_and_scenario():
    static = [Trajectory.static(p) for p in [(0, 0), (1, 0), (0, 1), (2, 2)]]
    assert cocircularity_avoidance_check(simulate(static, 0, 1, 0.1))
    trajs = [Trajectory.static(p, 0, 2) for p in [(0, 0), (1, 0), (0, 1)]]
    trajs.append(Trajectory((0.0, 1.0), (1.0,), 0, 2))
    log = simulate(trajs, 0.5, 1.5, 0.1)
    assert cocircularity_avoidance_check(log)
