"""Distance machinery for the regular k-gon.

The polygon ``Q`` has circumradius 1, vertices ``v_0..v_{k-1}`` in
clockwise order and grid directions ``u_j = -v_j`` (from ``v_j`` toward the
center).  A "v_j-placement at p" is the homothet ``p + lam*u_j + lam*Q``,
whose vertex ``v_j`` sits on ``p``; ``phi_diamond`` is the scale at which
that placement first reaches another point ``q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import GeneralPositionViolation, InvalidInput
from .euclid_delaunay import (
    NeighborTable,
    _check_k,
    argmin_table,
    as_point_array,
    direction_grid,
)
from .geom_core import wrap_pi

DiamondNeighborTable = NeighborTable

PARALLEL_TOL = 1e-12


@dataclass(frozen=True)
class RegularKGon:
    k: int
    offset: float = 0.0

    def __post_init__(self):
        _check_k(self.k)

    @cached_property
    def direction_angles(self) -> np.ndarray:
        return direction_grid(self.k, self.offset)

    @cached_property
    def directions(self) -> np.ndarray:
        a = self.direction_angles
        return np.stack([np.cos(a), np.sin(a)], axis=1)

    @cached_property
    def vertices(self) -> np.ndarray:
        """Vertices v_j = -u_j, clockwise."""
        return -self.directions

    @property
    def inradius(self) -> float:
        return math.cos(math.pi / self.k)

    @cached_property
    def normals(self) -> np.ndarray:
        """Outward unit normal of edge m = (v_m, v_{m+1})."""
        a = self.offset + math.pi - (2 * np.arange(self.k) + 1) * math.pi / self.k
        return np.stack([np.cos(a), np.sin(a)], axis=1)

    def u(self, j: int) -> np.ndarray:
        return self.directions[j % self.k]

    def is_parallel_direction(self, d, tol: float = PARALLEL_TOL) -> bool:
        """True when ``d`` is parallel to an edge or a diagonal of Q."""
        step = math.pi / self.k
        r = math.fmod(math.atan2(d[1], d[0]) - self.offset, step)
        r = r % step
        return min(r, step - r) <= tol


def dq_distance(Q: RegularKGon, x, y) -> float:
    """d_Q(x, y): smallest lam with y in x + lam*Q."""
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    if not np.any(d):
        return 0.0
    return float(np.max(Q.normals @ d) / Q.inradius)


def _grid_psi(d, angles) -> np.ndarray:
    return wrap_pi(np.arctan2(d[..., 1], d[..., 0])[..., None] - angles)


def phi_diamond(p, q, j: int, Q: RegularKGon) -> Optional[float]:
    """Scale of the v_j-placement at p that touches q, or None when no
    such placement exists.

    Solves ``q - p = lam*(u_j + w)`` for w on each edge of Q not incident
    to v_j; the ray from v_j through Q exits through exactly one of them.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(q, dtype=float) - p
    if not np.any(d):
        raise InvalidInput("phi_diamond needs p != q")
    k = Q.k
    j %= k
    u = Q.directions[j]
    limit = math.pi / 2 - math.pi / k
    psi = float(_grid_psi(d, np.array([Q.direction_angles[j]]))[0])
    if abs(abs(psi) - limit) <= PARALLEL_TOL:
        raise GeneralPositionViolation(
            f"pq is parallel to an edge of Q at v_{j}; the placement scale is not unique")
    if abs(psi) > limit:
        return None
    V = Q.vertices
    best = None
    for m in range(k):
        if m == j or (m + 1) % k == j:
            continue
        a, b = V[m], V[(m + 1) % k]
        e = b - a
        # mu*d - s*e = u + a, with mu = 1/lam
        A = np.array([[d[0], -e[0]], [d[1], -e[1]]])
        det = np.linalg.det(A)
        if det == 0.0:
            continue
        mu, s = np.linalg.solve(A, u + a)
        if mu > 0 and -1e-12 <= s <= 1 + 1e-12:
            lam = 1.0 / mu
            best = lam if best is None else min(best, lam)
    return best


def diamond_radii(pts: np.ndarray, Q: RegularKGon) -> np.ndarray:
    """phi_diamond for all ordered pairs and grid indices, inf where absent.

    Closed form of the per-edge solve: with psi the angle from u_j to pq,
    the ray from v_j leaves Q through edge s = floor((psi + pi/2) k / pi)
    after length t = (cos((2s+1)pi/k) - cos(pi/k)) / cos(psi - (2s+1)pi/k),
    and phi = |pq| / t.
    """
    k = Q.k
    D = pts[None, :, :] - pts[:, None, :]
    dist = np.hypot(D[..., 0], D[..., 1])
    psi = _grid_psi(D, Q.direction_angles)
    limit = math.pi / 2 - math.pi / k
    n = len(pts)
    off = ~np.eye(n, dtype=bool)[:, :, None]
    boundary = off & (np.abs(np.abs(psi) - limit) <= PARALLEL_TOL)
    if np.any(boundary):
        p, q, j = map(int, np.argwhere(boundary)[0])
        raise GeneralPositionViolation(
            f"pair ({p}, {q}) is parallel to an edge of Q at v_{j}", (p, q))
    finite = off & (np.abs(psi) < limit)
    s = np.clip(np.floor((psi + math.pi / 2) * k / math.pi), 1, k - 2)
    mid = (2 * s + 1) * math.pi / k
    t = (np.cos(mid) - math.cos(math.pi / k)) / np.cos(psi - mid)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(finite, dist[:, :, None] / t, np.inf)
    return phi


def neighbor_table_diamond(points, Q: RegularKGon) -> NeighborTable:
    pts = as_point_array(points)
    return argmin_table(diamond_radii(pts, Q), Q.k, Q.offset, what="polygonal neighbor")


def breakpoint_count(points, p: int, q: int, Q: RegularKGon,
                     table: Optional[NeighborTable] = None) -> tuple[int, int]:
    """Corner placements on the Q-Voronoi edge of pq, split by owner."""
    if table is None:
        table = neighbor_table_diamond(points, Q)
    return int(table.hits(p, q).sum()), int(table.hits(q, p).sum())


@dataclass(frozen=True)
class Breakpoint:
    center: tuple
    owner: str
    vertex: int
    scale: float


@dataclass(frozen=True)
class BisectorChain:
    """Breakpoints of the polygonal bisector, ordered across pq.

    Consecutive breakpoints are joined by straight pieces; the two ends
    continue as rays.
    """

    p: tuple
    q: tuple
    breakpoints: tuple

    @property
    def owners(self) -> list:
        return [b.owner for b in self.breakpoints]

    @property
    def alternates(self) -> bool:
        o = self.owners
        return all(a != b for a, b in zip(o, o[1:]))

    @property
    def segments(self) -> list:
        c = [b.center for b in self.breakpoints]
        return list(zip(c, c[1:]))


def bisector_diamond(p, q, Q: RegularKGon) -> BisectorChain:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = q - p
    if not np.any(d):
        raise InvalidInput("bisector needs p != q")
    if Q.is_parallel_direction(d):
        raise GeneralPositionViolation("pq is parallel to an edge or diagonal of Q")
    pts = np.stack([p, q])
    phi = diamond_radii(pts, Q)
    perp = np.array([-d[1], d[0]])
    bps = []
    for owner, (a, b) in (("p", (0, 1)), ("q", (1, 0))):
        for j in np.flatnonzero(np.isfinite(phi[a, b])).tolist():
            lam = float(phi[a, b, j])
            c = pts[a] + lam * Q.directions[j]
            bps.append(Breakpoint((float(c[0]), float(c[1])), owner, j, lam))
    bps.sort(key=lambda b: float(np.dot(b.center, perp)))
    return BisectorChain(tuple(p.tolist()), tuple(q.tolist()), tuple(bps))
