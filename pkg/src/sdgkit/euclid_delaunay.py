"""Euclidean Delaunay triangulation, Voronoi duals and stability angles.

The triangulation is built by Bowyer-Watson insertion over a triangulation
augmented with ghost triangles (one per hull edge, sharing the vertex
``GHOST``), so points outside the current hull need no special casing.
All decisions use the exact predicates of :mod:`sdgkit.geom_core`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateInput,
    GeneralPositionViolation,
    InternalInconsistency,
    InvalidInput,
    NotAnEdge,
)
from .geom_core import angle_at, circumcenter, incircle_raw, orient_raw

GHOST = -1


def as_point_array(points) -> np.ndarray:
    """Validate and copy a point set into an ``(n, 2)`` float array."""
    arr = np.array(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInput(f"expected an (n, 2) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInput("point coordinates must be finite")
    return arr


def _check_distinct(pts: np.ndarray) -> None:
    seen = {}
    for i, (x, y) in enumerate(pts.tolist()):
        j = seen.setdefault((x, y), i)
        if j != i:
            raise InvalidInput(f"points {j} and {i} coincide")


class _Builder:
    """Mutable ghost-augmented triangulation used during construction."""

    def __init__(self, pts: np.ndarray, seed: int = 0x5D6):
        self.xy = [tuple(p) for p in pts.tolist()]
        self.adj: dict[tuple[int, int], int] = {}
        self.last: Optional[tuple[int, int, int]] = None
        self.rng = random.Random(seed)

    def add(self, a, b, c):
        adj = self.adj
        adj[(a, b)] = c
        adj[(b, c)] = a
        adj[(c, a)] = b
        if a != GHOST and b != GHOST and c != GHOST:
            self.last = (a, b, c)

    def remove(self, a, b, c):
        adj = self.adj
        del adj[(a, b)]
        del adj[(b, c)]
        del adj[(c, a)]

    def orient(self, a, b, c) -> int:
        xy = self.xy
        return orient_raw(*xy[a], *xy[b], *xy[c])

    def in_conflict(self, a, b, c, x) -> bool:
        if a == GHOST:
            a, b, c = b, c, a
        elif b == GHOST:
            a, b, c = c, a, b
        xy = self.xy
        if c != GHOST:
            return incircle_raw(*xy[a], *xy[b], *xy[c], *xy[x]) > 0
        o = orient_raw(*xy[a], *xy[b], *xy[x])
        if o != 0:
            return o > 0
        # collinear with the hull edge: conflict only strictly inside the segment
        (ax, ay), (bx, by), (px, py) = xy[a], xy[b], xy[x]
        return (px - ax) * (bx - ax) + (py - ay) * (by - ay) > 0 and \
            (px - bx) * (ax - bx) + (py - by) * (ay - by) > 0

    def locate(self, x) -> tuple[int, int, int]:
        """Visibility walk to a triangle whose circumdisk contains ``x``."""
        a, b, c = self.last
        for _ in range(4 * len(self.xy) + 16):
            edges = [(a, b, c), (b, c, a), (c, a, b)]
            self.rng.shuffle(edges)
            for u, v, _w in edges:
                if self.orient(u, v, x) < 0:
                    y = self.adj[(v, u)]
                    if y == GHOST:
                        return (v, u, GHOST)
                    a, b, c = v, u, y
                    break
            else:
                return (a, b, c)
        # the walk cannot cycle on a Delaunay triangulation; scan as a fallback
        for (u, v), w in self.adj.items():
            if self.in_conflict(u, v, w, x):
                return (u, v, w)
        raise InternalInconsistency(f"no conflicting triangle for point {x}")

    def insert(self, x) -> None:
        a, b, c = self.locate(x)
        if not self.in_conflict(a, b, c, x):
            raise InternalInconsistency(f"located triangle does not conflict with {x}")
        self.remove(a, b, c)
        stack = [(a, b), (b, c), (c, a)]
        while stack:
            u, v = stack.pop()
            y = self.adj.get((v, u))
            if y is None:
                continue
            if self.in_conflict(v, u, y, x):
                self.remove(v, u, y)
                stack.append((u, y))
                stack.append((y, v))
            else:
                self.add(u, v, x)


@dataclass
class Triangulation:
    """Delaunay triangulation with ghost-augmented adjacency.

    ``triangles`` are counterclockwise index triples rotated so the smallest
    index comes first, sorted.  ``hull`` lists the hull vertices in
    counterclockwise order starting at the smallest index.
    """

    points: np.ndarray
    triangles: list
    hull: list
    adjacency: dict = field(repr=False)

    @cached_property
    def edges(self) -> list:
        es = {(min(u, v), max(u, v)) for (u, v) in self.adjacency if u != GHOST and v != GHOST}
        return sorted(es)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def n(self) -> int:
        return len(self.points)

    def has_edge(self, p: int, q: int) -> bool:
        return (min(p, q), max(p, q)) in self.edge_set

    def apexes(self, p: int, q: int) -> tuple[Optional[int], Optional[int]]:
        """Third vertices of the triangles left and right of ``p -> q``."""
        if not self.has_edge(p, q):
            raise NotAnEdge(f"({p}, {q}) is not a Delaunay edge")
        left = self.adjacency[(p, q)]
        right = self.adjacency[(q, p)]
        return (None if left == GHOST else left, None if right == GHOST else right)

    def is_hull_edge(self, p: int, q: int) -> bool:
        left, right = self.apexes(p, q)
        return left is None or right is None


def _canonical(tri):
    a, b, c = tri
    if b < a and b < c:
        return (b, c, a)
    if c < a and c < b:
        return (c, a, b)
    return (a, b, c)


def triangulation_from_adjacency(points: np.ndarray, adj: dict) -> Triangulation:
    tris = set()
    cw_next = {}
    for (u, v), w in adj.items():
        if GHOST in (u, v, w):
            if w == GHOST:
                cw_next[u] = v
            continue
        tris.add(_canonical((u, v, w)))
    start = min(cw_next)
    ring = [start]
    nxt = cw_next[start]
    while nxt != start:
        ring.append(nxt)
        nxt = cw_next[nxt]
    hull = [ring[0]] + ring[1:][::-1]
    return Triangulation(points=points, triangles=sorted(tris), hull=hull, adjacency=dict(adj))


def build_delaunay(points, check_general_position: bool = True) -> Triangulation:
    """Delaunay triangulation of a planar point set.

    Raises DegenerateInput when all points are collinear and
    GeneralPositionViolation when two adjacent triangles are exactly
    cocircular (unless ``check_general_position`` is False).
    """
    pts = as_point_array(points)
    n = len(pts)
    if n < 3:
        raise InvalidInput("need at least three points")
    _check_distinct(pts)
    b = _Builder(pts)
    i0, i1 = 0, 1
    i2 = next((i for i in range(2, n) if b.orient(i0, i1, i) != 0), None)
    if i2 is None:
        raise DegenerateInput("all points are collinear")
    if b.orient(i0, i1, i2) < 0:
        i0, i1 = i1, i0
    b.add(i0, i1, i2)
    b.add(i1, i0, GHOST)
    b.add(i2, i1, GHOST)
    b.add(i0, i2, GHOST)
    rest = [i for i in range(n) if i not in (i0, i1, i2)]
    random.Random(n).shuffle(rest)
    for x in rest:
        b.insert(x)
    dt = triangulation_from_adjacency(pts, b.adj)
    if check_general_position:
        for p, q in dt.edges:
            left, right = dt.apexes(p, q)
            if left is not None and right is not None:
                if incircle_raw(*b.xy[p], *b.xy[q], *b.xy[left], *b.xy[right]) == 0:
                    raise GeneralPositionViolation(
                        f"points {p}, {q}, {left}, {right} are cocircular",
                        (p, q, left, right))
    return dt


@dataclass(frozen=True)
class VoronoiEdge:
    """Dual Voronoi edge of a Delaunay edge.

    Bounded edges have ``end`` set; unbounded ones carry a unit
    ``direction`` for the ray leaving ``start``.
    """

    sites: tuple
    start: tuple
    end: Optional[tuple] = None
    direction: Optional[tuple] = None

    @property
    def is_ray(self) -> bool:
        return self.end is None


def _pt(dt: Triangulation, i: int) -> tuple:
    x, y = dt.points[i]
    return (float(x), float(y))


def voronoi_edge(dt: Triangulation, edge: Sequence[int]) -> VoronoiEdge:
    p, q = int(edge[0]), int(edge[1])
    left, right = dt.apexes(p, q)
    P, Q = _pt(dt, p), _pt(dt, q)
    if left is not None and right is not None:
        return VoronoiEdge((p, q), circumcenter(P, Q, _pt(dt, left)),
                           end=circumcenter(P, Q, _pt(dt, right)))
    apex = left if left is not None else right
    A = _pt(dt, apex)
    start = circumcenter(P, Q, A)
    dx, dy = Q[0] - P[0], Q[1] - P[1]
    nx, ny = -dy, dx
    norm = math.hypot(nx, ny)
    nx, ny = nx / norm, ny / norm
    mx, my = (P[0] + Q[0]) / 2, (P[1] + Q[1]) / 2
    if nx * (A[0] - mx) + ny * (A[1] - my) > 0:
        nx, ny = -nx, -ny
    return VoronoiEdge((p, q), start, direction=(nx, ny))


def stability_angle(dt: Triangulation, edge: Sequence[int]) -> float:
    """pi minus the two opposite angles of the edge (0 for a missing apex)."""
    p, q = int(edge[0]), int(edge[1])
    left, right = dt.apexes(p, q)
    P, Q = _pt(dt, p), _pt(dt, q)
    total = 0.0
    for r in (left, right):
        if r is not None:
            total += angle_at(_pt(dt, r), P, Q)
    return min(math.pi, max(0.0, math.pi - total))


def visual_angle(dt: Triangulation, edge: Sequence[int], at: int) -> float:
    """Angle at which site ``at`` sees the dual Voronoi edge of ``edge``.

    A ray is seen at the angle between the segment from the site to the
    ray's origin and the ray direction.
    """
    ve = voronoi_edge(dt, edge)
    if at not in ve.sites:
        raise InvalidInput(f"site {at} is not an endpoint of {edge}")
    S = _pt(dt, at)
    sx, sy = ve.start[0] - S[0], ve.start[1] - S[1]
    if ve.is_ray:
        dx, dy = ve.direction
    else:
        dx, dy = ve.end[0] - S[0], ve.end[1] - S[1]
    return math.atan2(abs(sx * dy - sy * dx), sx * dx + sy * dy)


def all_stability_angles(dt: Triangulation) -> dict:
    return {e: stability_angle(dt, e) for e in dt.edges}


def direction_grid(k: int, offset: float = 0.0) -> np.ndarray:
    """Angles of u_0..u_{k-1}, indexed clockwise from ``offset``."""
    return offset - 2.0 * math.pi * np.arange(k) / k


def _check_k(k: int) -> None:
    if k < 8 or k % 2:
        raise InvalidInput(f"k must be an even integer >= 8, got {k}")


class NeighborTable:
    """Directional neighbors: for point p and grid index j the minimizing
    point and its radius, absent (masked) when no candidate is finite."""

    def __init__(self, k: int, offset: float, neighbor: np.ma.MaskedArray,
                 radius: np.ma.MaskedArray):
        self.k = k
        self.offset = offset
        self.neighbor = neighbor
        self.radius = radius

    @property
    def n(self) -> int:
        return self.neighbor.shape[0]

    def neighbor_of(self, p: int, j: int) -> Optional[int]:
        v = self.neighbor[p, j]
        return None if v is np.ma.masked else int(v)

    def radius_of(self, p: int, j: int) -> Optional[float]:
        v = self.radius[p, j]
        return None if v is np.ma.masked else float(v)

    def hits(self, p: int, q: int) -> np.ndarray:
        """Boolean mask over j of ``N_j(p) == q``."""
        return np.asarray(self.neighbor.filled(-1)[p] == q)

    def hit_counts(self) -> dict:
        """Map ordered pair (p, q) to the number of indices j with N_j(p)=q."""
        nb = self.neighbor.filled(-1)
        out: dict = {}
        for p in range(nb.shape[0]):
            vals, counts = np.unique(nb[p][nb[p] >= 0], return_counts=True)
            for q, c in zip(vals.tolist(), counts.tolist()):
                out[(p, q)] = c
        return out


def argmin_table(phi: np.ndarray, k: int, offset: float, rel_tol: float = 1e-12,
                 what: str = "neighbor") -> NeighborTable:
    """Reduce an ``(n, n, k)`` radius array (inf = undefined) to a table."""
    n = phi.shape[0]
    if n >= 3:
        two = np.partition(phi, 1, axis=1)[:, :2, :]
        first, second = two[:, 0, :], two[:, 1, :]
        with np.errstate(invalid="ignore"):
            tie = np.isfinite(second) & (second - first <= rel_tol * first)
        if np.any(tie):
            p, j = map(int, np.argwhere(tie)[0])
            qs = np.flatnonzero(phi[p, :, j] <= second[p, j])[:2].tolist()
            raise GeneralPositionViolation(
                f"{what} tie for point {p}, direction {j}: candidates {qs}", (p, *qs))
    idx = np.argmin(phi, axis=1)
    best = np.take_along_axis(phi, idx[:, None, :], axis=1)[:, 0, :]
    absent = ~np.isfinite(best)
    return NeighborTable(k, offset, np.ma.array(idx, mask=absent),
                         np.ma.array(np.where(absent, 0.0, best), mask=absent))


def euclid_radii(pts: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """phi[p, q, j]: distance from p along u_j to the bisector of pq."""
    U = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    D = pts[None, :, :] - pts[:, None, :]
    dots = D @ U.T
    sq = np.einsum("pqi,pqi->pq", D, D)[:, :, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(dots > 0, sq / (2.0 * dots), np.inf)
    idx = np.arange(len(pts))
    phi[idx, idx, :] = np.inf
    return phi


def neighbor_table_euclid(points, k: int, offset: float = 0.0) -> NeighborTable:
    _check_k(k)
    pts = as_point_array(points)
    return argmin_table(euclid_radii(pts, direction_grid(k, offset)), k, offset,
                        what="Euclidean neighbor")
