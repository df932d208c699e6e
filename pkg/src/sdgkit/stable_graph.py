"""Stable Delaunay graphs: extraction, verification and structural checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import GeneralPositionViolation, InternalInconsistency, InvalidInput
from .euclid_delaunay import (
    NeighborTable,
    Triangulation,
    as_point_array,
    build_delaunay,
    neighbor_table_euclid,
    stability_angle,
)
from .polygon_metric import RegularKGon, neighbor_table_diamond


@dataclass(frozen=True)
class EdgeRecord:
    p: int
    q: int
    stability: float
    breakpoints: Optional[int] = None


@dataclass
class StableGraphReport:
    alpha: float
    method: str
    edges: list
    s1_violations: list = field(default_factory=list)
    s2_violations: list = field(default_factory=list)
    alpha_prime: Optional[float] = None

    @property
    def edge_set(self) -> set:
        return {(e.p, e.q) for e in self.edges}

    @property
    def passed(self) -> bool:
        return not self.s1_violations and not self.s2_violations

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "alpha_prime": self.alpha_prime,
            "method": self.method,
            "edges": [[e.p, e.q, e.stability, e.breakpoints] for e in self.edges],
            "s1_violations": [list(e) for e in self.s1_violations],
            "s2_violations": [list(e) for e in self.s2_violations],
        }


def _key(p: int, q: int) -> tuple:
    return (p, q) if p < q else (q, p)


def stabilities(dt: Triangulation) -> dict:
    return {e: stability_angle(dt, e) for e in dt.edges}


def sdg_euclidean(points, alpha: float, dt: Optional[Triangulation] = None) -> StableGraphReport:
    if not 0 < alpha < math.pi:
        raise InvalidInput("alpha must lie in (0, pi)")
    dt = dt or build_delaunay(points)
    edges = [EdgeRecord(p, q, s) for (p, q), s in stabilities(dt).items() if s >= alpha]
    return StableGraphReport(alpha, "euclid_exact", edges, alpha_prime=alpha)


def breakpoint_totals(table: NeighborTable) -> dict:
    """Unordered pair -> (hits from the smaller index, hits from the larger)."""
    counts = table.hit_counts()
    out = {}
    for (p, q), c in counts.items():
        a, b = _key(p, q)
        lo, hi = out.get((a, b), (0, 0))
        out[(a, b)] = (c, hi) if p == a else (lo, c)
    return out


def sdg_proxy(points, k: int, offset: float = 0.0, dt: Optional[Triangulation] = None,
              table: Optional[NeighborTable] = None, threshold: int = 11) -> StableGraphReport:
    """Edges whose Q-Voronoi edge carries at least ``threshold`` breakpoints."""
    if k < 24 or k % 2:
        raise InvalidInput("the breakpoint proxy needs an even k >= 24")
    pts = as_point_array(points)
    dt = dt or build_delaunay(pts)
    table = table or neighbor_table_diamond(pts, RegularKGon(k, offset))
    edges = []
    for (p, q), (a, b) in sorted(breakpoint_totals(table).items()):
        if a + b >= threshold:
            s = stability_angle(dt, (p, q)) if dt.has_edge(p, q) else 0.0
            edges.append(EdgeRecord(p, q, s, a + b))
    return StableGraphReport(2 * math.pi / k, "breakpoint_proxy", edges,
                             alpha_prime=8 * 2 * math.pi / k)


def verify_sdg(points, graph: Iterable, alpha: float, alpha_prime: float,
               dt: Optional[Triangulation] = None) -> StableGraphReport:
    """S1: graph edges below alpha; S2: alpha_prime-stable edges missing."""
    if alpha > alpha_prime:
        raise InvalidInput("alpha must not exceed alpha_prime")
    dt = dt or build_delaunay(points)
    stab = stabilities(dt)
    gset = {_key(int(e[0]), int(e[1])) for e in graph}
    s1 = sorted(e for e in gset if stab.get(e, 0.0) < alpha)
    s2 = sorted(e for e, s in stab.items() if s >= alpha_prime and e not in gset)
    edges = [EdgeRecord(p, q, stab.get((p, q), 0.0)) for p, q in sorted(gset)]
    return StableGraphReport(alpha, "verify", edges, s1, s2, alpha_prime)


def beta_skeleton(points, beta: float) -> set:
    """Circle-based beta-skeleton by brute force over all pairs."""
    if beta < 1:
        raise InvalidInput("beta must be at least 1")
    pts = as_point_array(points)
    n = len(pts)
    out = set()
    for p in range(n):
        q = np.arange(p + 1, n)
        if len(q) == 0:
            continue
        d = pts[q] - pts[p]
        L = np.hypot(d[:, 0], d[:, 1])
        r = beta * L / 2
        mid = (pts[q] + pts[p]) / 2
        perp = np.stack([-d[:, 1], d[:, 0]], axis=1) / L[:, None]
        off = np.sqrt(np.maximum(r * r - (L / 2) ** 2, 0.0))
        empty = np.ones(len(q), dtype=bool)
        for sgn in (1.0, -1.0):
            c = mid + sgn * off[:, None] * perp
            dist = np.hypot(pts[None, :, 0] - c[:, None, 0], pts[None, :, 1] - c[:, None, 1])
            inside = dist < r[:, None] * (1 - 1e-12)
            inside[np.arange(len(q)), q] = False
            inside[:, p] = False
            empty &= ~inside.any(axis=1)
        out.update((p, int(j)) for j in q[empty])
    return out


def gabriel_graph(points) -> set:
    return beta_skeleton(points, 1.0)


def closest_pair(points) -> tuple[int, int]:
    pts = as_point_array(points)
    if len(pts) < 2:
        raise InvalidInput("need at least two points")
    D = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    D[np.tril_indices(len(pts))] = np.inf
    flat = np.argsort(D, axis=None)[:2]
    best, second = D.flat[flat[0]], D.flat[flat[1]]
    if len(pts) > 2 and second == best:
        raise GeneralPositionViolation("closest pair is not unique")
    p, q = np.unravel_index(flat[0], D.shape)
    return int(p), int(q)


def rng(points) -> set:
    """Relative neighborhood graph by the lune-emptiness test."""
    pts = as_point_array(points)
    n = len(pts)
    D = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    out = set()
    for p in range(n):
        lune = np.maximum(D[p][None, :], D)  # [q, r] -> max(|pr|, |qr|)
        blocked = (lune < D[p][:, None])
        blocked[:, p] = False
        blocked[np.arange(n), np.arange(n)] = False
        for q in range(p + 1, n):
            if not blocked[q].any():
                out.add((p, q))
    return out


def lower_bound_check(points, alpha: float, dt: Optional[Triangulation] = None) -> tuple:
    if not 0 < alpha < math.pi / 6:
        raise InvalidInput("alpha must lie in (0, pi/6)")
    pts = as_point_array(points)
    count = len(sdg_euclidean(pts, alpha, dt).edges)
    bound = len(pts) * (1 - 6 * alpha / math.pi) - 2
    return count, bound, count >= bound


def cocircularity_avoidance_check(event_log, alpha: Optional[float] = None) -> bool:
    """True iff every flipped edge was already below alpha just before its flip."""
    alpha = event_log.alpha if alpha is None else alpha
    delta = event_log.event_tol
    for ev in event_log.events:
        if ev.kind != "flip":
            continue
        t = max(event_log.t0, ev.time - delta)
        dt = event_log.triangulation_at(t)
        a, b = ev.participants[:2]
        if dt.has_edge(a, b) and stability_angle(dt, (a, b)) >= alpha:
            return False
    return True


# lemma verification on neighbor tables

def cyclic_runs(mask: np.ndarray) -> list:
    """Maximal cyclic runs of True, each as a list of indices in order."""
    mask = np.asarray(mask, dtype=bool)
    k = len(mask)
    if mask.all():
        return [list(range(k))]
    if not mask.any():
        return []
    start = int(np.flatnonzero(~mask)[0]) + 1
    runs, cur = [], []
    for i in range(k):
        j = (start + i) % k
        if mask[j]:
            cur.append(j)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _pairs(table: NeighborTable) -> list:
    return sorted(table.hit_counts())


def long_euc_poly_violations(euc: NeighborTable, dia: NeighborTable) -> list:
    """(p, q, j) where a long Euclidean run misses a polygonal hit inside it."""
    out = []
    for p, q in _pairs(euc):
        dh = dia.hits(p, q)
        for run in cyclic_runs(euc.hits(p, q)):
            if len(run) >= 3:
                out.extend((p, q, j) for j in run[1:-1] if not dh[j])
    return out


def long_polyg_euc_violations(euc: NeighborTable, dia: NeighborTable) -> list:
    """(p, q, j) where a polygonal run of five or more misses a Euclidean hit
    away from its two ends."""
    out = []
    for p, q in _pairs(dia):
        eh = euc.hits(p, q)
        for run in cyclic_runs(dia.hits(p, q)):
            if len(run) >= 5:
                out.extend((p, q, j) for j in run[2:-2] if not eh[j])
    return out


def _run_length(mask: np.ndarray) -> int:
    runs = cyclic_runs(mask)
    if len(runs) > 1:
        raise InternalInconsistency("hit set is not cyclically contiguous")
    return len(runs[0]) if runs else 0


def theorem_4a6a_violations(dt: Triangulation, dia: NeighborTable, k: int) -> tuple[list, list]:
    """Edges violating either direction of the 4-alpha / 6-alpha theorem."""
    alpha = 2 * math.pi / k
    stab = stabilities(dt)
    forward = [e for e, s in stab.items()
               if s >= 4 * alpha and (dia.hits(*e).sum() < 2 or dia.hits(e[1], e[0]).sum() < 2)]
    backward = []
    for p, q in sorted({_key(p, q) for p, q in _pairs(dia)}):
        if _run_length(dia.hits(p, q)) >= 6 and _run_length(dia.hits(q, p)) >= 6:
            if stab.get((p, q), 0.0) < alpha:
                backward.append((p, q))
    return forward, backward


def sandwich_violations(points, k: int, offset: float = 0.0,
                        dt: Optional[Triangulation] = None,
                        table: Optional[NeighborTable] = None) -> tuple[list, list]:
    """(missing strong edges, included weak edges) for the breakpoint proxy."""
    alpha = 2 * math.pi / k
    dt = dt or build_delaunay(points)
    proxy = sdg_proxy(points, k, offset, dt=dt, table=table)
    strong = set(sdg_euclidean(points, 8 * alpha, dt).edge_set)
    weak = set(sdg_euclidean(points, alpha, dt).edge_set)
    ps = proxy.edge_set
    return sorted(strong - ps), sorted(ps - weak)


@dataclass
class LemmaSuiteResult:
    long_euc_poly: list
    long_polyg_euc: list
    theorem_forward: list
    theorem_backward: list
    sandwich_missing: list
    sandwich_extra: list

    @property
    def violations(self) -> int:
        return sum(len(v) for v in vars(self).values())


def lemma_suite(points, k: int, offset: float = 0.0) -> LemmaSuiteResult:
    """All discrete-direction lemma checks on one point set."""
    pts = as_point_array(points)
    dt = build_delaunay(pts)
    euc = neighbor_table_euclid(pts, k, offset)
    dia = neighbor_table_diamond(pts, RegularKGon(k, offset))
    fwd, bwd = theorem_4a6a_violations(dt, dia, k)
    miss, extra = sandwich_violations(pts, k, offset, dt=dt, table=dia) if k >= 24 else ([], [])
    return LemmaSuiteResult(long_euc_poly_violations(euc, dia), long_polyg_euc_violations(euc, dia),
                            fwd, bwd, miss, extra)


# proximity graph containments

def proximity_violations(points, betas=(1.05, 1.2, 2.0), tol: float = 1e-9,
                         dt: Optional[Triangulation] = None) -> list:
    """Skeleton edges below 2 acos(1/beta) and a closest pair below pi/3.

    Entries are (name, p, q, stability, bound).
    """
    pts = as_point_array(points)
    dt = dt or build_delaunay(pts)
    stab = stabilities(dt)
    out = []
    for beta in betas:
        bound = 2 * math.acos(1.0 / beta)
        for e in sorted(beta_skeleton(pts, beta)):
            s = stab.get(e, 0.0)
            if s < bound - tol:
                out.append((f"beta={beta}", e[0], e[1], s, bound))
    e = _key(*closest_pair(pts))
    s = stab.get(e, 0.0)
    if s < math.pi / 3 - tol:
        out.append(("closest_pair", e[0], e[1], s, math.pi / 3))
    return out


# Euclidean versus convex-distance stability, sampled

def theorem1_violations(points, Q, resolution: int = 8192, offset: float = 0.0,
                        dt: Optional[Triangulation] = None) -> tuple[list, list]:
    """Both directions of the 11-alpha transfer between the Euclidean and the
    Q-Delaunay graph, with Q-stabilities sampled on ``resolution`` directions.

    Forward: Euclidean stability >= 11 alpha must give sampled Q-stability
    >= alpha - 2 step at both endpoints.  Converse: sampled Q-stability
    >= 11 alpha + 2 step at both endpoints must give Euclidean stability
    >= alpha.  Entries are (p, q, euclidean, q_at_p, q_at_q).
    """
    from .convex_distance import QNeighborSampler, alpha_closeness, q_stability_angles

    pts = as_point_array(points)
    dt = dt or build_delaunay(pts)
    alpha = alpha_closeness(Q).alpha
    step = 2 * math.pi / resolution
    nbrs = QNeighborSampler(Q, resolution, offset).neighbors(pts)
    stab = stabilities(dt)
    pairs = set(stab)
    for p in range(len(pts)):
        for q in np.unique(nbrs[p]).tolist():
            if q >= 0:
                pairs.add(_key(p, q))
    forward, converse = [], []
    for p, q in sorted(pairs):
        s = stab.get((p, q), 0.0)
        ap, aq = q_stability_angles(nbrs, p, q)
        rec = (p, q, s, ap, aq)
        if s >= 11 * alpha and min(ap, aq) < alpha - 2 * step:
            forward.append(rec)
        if min(ap, aq) >= 11 * alpha + 2 * step and s < alpha:
            converse.append(rec)
    return forward, converse
