"""Convex distance functions for polygons close to the unit disk.

A ConvexBody is a counterclockwise polygon with the origin strictly inside.
For a direction u, ``Q_pq(u)`` is the homothet of Q touching p and q whose
center lies on the ray u[p]; the point p then sits at the boundary point
``zeta = rho(-u)*(-u)`` of the scaled copy.  Homothets sharing p at the
same boundary point are nested, which is what makes the emptiness test a
plain argmin over candidate points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import (
    GeneralPositionViolation,
    InternalInconsistency,
    InvalidBody,
    InvalidInput,
    NotClose,
    PreconditionFailed,
)
from .euclid_delaunay import as_point_array
from .geom_core import TWO_PI, as_direction, orient_raw

_TOL = 1e-12


@dataclass(frozen=True)
class ConvexBody:
    """Strictly convex counterclockwise polygon containing the origin."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise InvalidBody("a body needs at least three 2D vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidBody("non-finite vertex coordinate")
        m = len(v)
        vl = v.tolist()
        for i in range(m):
            a, b, c = vl[i], vl[(i + 1) % m], vl[(i + 2) % m]
            if orient_raw(*a, *b, *c) <= 0:
                raise InvalidBody(f"vertices {i}..{(i + 2) % m} are not strictly convex and counterclockwise")
            if orient_raw(*a, *b, 0.0, 0.0) <= 0:
                raise InvalidBody("origin is not strictly inside the body")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def regular(cls, k: int, offset: float = 0.0) -> "ConvexBody":
        """Regular k-gon of circumradius 1 with a vertex at angle ``offset``."""
        a = offset + TWO_PI * np.arange(k) / k
        return cls(np.stack([np.cos(a), np.sin(a)], axis=1))

    @property
    def m(self) -> int:
        return len(self.vertices)

    @cached_property
    def normals(self) -> np.ndarray:
        """Outward unit normal of edge e = (v_e, v_{e+1})."""
        e = np.roll(self.vertices, -1, axis=0) - self.vertices
        n = np.stack([e[:, 1], -e[:, 0]], axis=1)
        return n / np.linalg.norm(n, axis=1)[:, None]

    @cached_property
    def offsets(self) -> np.ndarray:
        """Distance from the origin to each edge line."""
        return np.einsum("ei,ei->e", self.normals, self.vertices)

    @cached_property
    def max_vertex_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    @cached_property
    def min_edge_distance(self) -> float:
        return float(np.min(self.offsets))

    @cached_property
    def _polar(self) -> np.ndarray:
        a = np.arctan2(self.vertices[:, 1], self.vertices[:, 0])
        return np.unwrap(a)

    def edge_at(self, angles) -> np.ndarray:
        """Index of the edge hit by the ray from the origin at each angle."""
        pol = self._polar
        rel = (np.asarray(angles) - pol[0]) % TWO_PI
        return (np.searchsorted(pol - pol[0], rel, side="right") - 1) % self.m

    def boundary_point(self, angle: float) -> np.ndarray:
        """rho(angle) times the unit vector at ``angle``."""
        e = int(self.edge_at(angle))
        w = np.array([math.cos(angle), math.sin(angle)])
        return w * self.offsets[e] / float(self.normals[e] @ w)

    def radial(self, angle: float) -> float:
        return float(np.linalg.norm(self.boundary_point(angle)))

    def gauge(self, d) -> float:
        """d_Q(0, d): smallest lam with d in lam*Q."""
        d = np.asarray(d, dtype=float)
        return float(max(0.0, np.max((self.normals @ d) / self.offsets)))

    def contains(self, x, tol: float = 0.0) -> bool:
        return bool(np.all(self.normals @ np.asarray(x, float) <= self.offsets + tol))


@dataclass(frozen=True)
class ClosenessCertificate:
    alpha: float
    outer: float
    inner: float


def alpha_closeness(Q: ConvexBody) -> ClosenessCertificate:
    if Q.max_vertex_norm > 1.0 + _TOL:
        raise NotClose(f"vertex at distance {Q.max_vertex_norm} lies outside the unit disk")
    inner = Q.min_edge_distance
    return ClosenessCertificate(math.acos(min(1.0, inner)), Q.max_vertex_norm, inner)


@dataclass(frozen=True)
class Homothet:
    """``center + scale*body``; a body of None stands for the unit disk."""

    center: tuple
    scale: float
    body: Optional[ConvexBody] = None

    def contains(self, x, tol: float = 0.0) -> bool:
        d = np.asarray(x, float) - np.asarray(self.center)
        if self.body is None:
            return float(np.hypot(*d)) <= self.scale * (1.0 + tol)
        return self.body.gauge(d) <= self.scale * (1.0 + tol)

    def vertices(self) -> np.ndarray:
        if self.body is None:
            raise InvalidInput("a disk has no vertices")
        return np.asarray(self.center) + self.scale * self.body.vertices


def _angle(u) -> float:
    return as_direction(u).angle


def disk_through(p, q, u) -> Optional[Homothet]:
    """Disk touching p and q with center on the ray u[p], if any."""
    p = np.asarray(p, float)
    d = np.asarray(q, float) - p
    a = _angle(u)
    w = np.array([math.cos(a), math.sin(a)])
    dot = float(d @ w)
    # a ray within _TOL of parallel to the bisector has no disk
    if dot <= _TOL * float(np.hypot(*d)):
        return None
    r = float(d @ d) / (2.0 * dot)
    c = p + r * w
    return Homothet((float(c[0]), float(c[1])), r)


def q_homothet_through(p, q, u, Q: ConvexBody) -> Optional[Homothet]:
    """Homothet of Q touching p and q with center on u[p], if any.

    Raises GeneralPositionViolation when pq runs along the edge of Q that
    holds p, where the scale is not unique.
    """
    p = np.asarray(p, float)
    d = np.asarray(q, float) - p
    if not np.any(d):
        raise InvalidInput("q_homothet_through needs p != q")
    a = _angle(u)
    zeta = Q.boundary_point(a + math.pi)
    den = Q.offsets - Q.normals @ zeta
    num = Q.normals @ d
    scale = max(1.0, float(np.max(np.abs(Q.offsets))))
    on = den <= 1e-12 * scale
    dn = num[on] / float(np.linalg.norm(d))
    if np.any(np.abs(dn) <= _TOL):
        raise GeneralPositionViolation("pq runs along the edge of Q through p")
    if np.any(dn > 0):
        return None
    lam = float(np.max(num[~on] / den[~on]))
    if lam <= 0:
        return None
    c = p - lam * zeta
    return Homothet((float(c[0]), float(c[1])), lam, Q)


@dataclass(frozen=True)
class SupportingLine:
    """Line through ``point`` with outward unit ``normal``.  At a vertex,
    ``extremes`` holds the normals of the two incident edges."""

    point: tuple
    normal: tuple
    extremes: Optional[tuple] = None


def supporting_line(Q: ConvexBody, boundary_direction) -> SupportingLine:
    a = _angle(boundary_direction)
    x = Q.boundary_point(a)
    d = Q.normals @ x - Q.offsets
    on = np.flatnonzero(np.abs(d) <= 1e-12)
    if len(on) == 1:
        n = Q.normals[on[0]]
        return SupportingLine(tuple(x.tolist()), tuple(n.tolist()))
    n1, n2 = Q.normals[on[0]], Q.normals[on[-1]]
    mid = n1 + n2
    mid /= np.linalg.norm(mid)
    return SupportingLine(tuple(x.tolist()), tuple(mid.tolist()),
                          (tuple(n1.tolist()), tuple(n2.tolist())))


def _line_angle(n1, n2) -> float:
    """Angle in [0, pi/2] between two lines given by their normals."""
    c = abs(float(np.dot(n1, n2)) / (np.linalg.norm(n1) * np.linalg.norm(n2)))
    return math.acos(min(1.0, c))


def claim_tangent_arc(Q: ConvexBody, x, normal) -> float:
    """Largest angle between a supporting line at x and the tangents of the
    unit circle along the arc it cuts off beyond x."""
    n = np.asarray(normal, float)
    c = float(n @ np.asarray(x, float))
    c = max(-1.0, min(1.0, c))
    # the arc beyond the line spans angles within acos(c) of n
    return math.acos(c)


def claim_chord_angles(x, nx, y, ny) -> float:
    """Difference of the acute angles that two supporting lines make with xy."""
    d = np.asarray(y, float) - np.asarray(x, float)
    perp = np.array([-d[1], d[0]])
    return abs(_line_angle(nx, perp) - _line_angle(ny, perp))


def claim_radial_tangent(x, normal) -> float:
    """Angle between a supporting line at x and the line orthogonal to ox."""
    return _line_angle(normal, x)


def check_contain_lemma(p, q, u, Q: ConvexBody, side: str,
                        alpha: Optional[float] = None, tol: float = 1e-9) -> bool:
    """Whether the part of Q_pq(u) on ``side`` of the directed line pq
    lies in the disk D_pq(u rotated by 5 alpha).

    ``side='+'`` is the right of p->q with u rotated clockwise;
    ``side='-'`` the left with u rotated counterclockwise.
    """
    if side not in ("+", "-"):
        raise InvalidInput("side must be '+' or '-'")
    if alpha is None:
        alpha = alpha_closeness(Q).alpha
    a = _angle(u)
    H = q_homothet_through(p, q, a, Q)
    if H is None:
        raise PreconditionFailed("Q_pq(u) is undefined")
    rot = a - 5 * alpha if side == "+" else a + 5 * alpha
    D = disk_through(p, q, rot)
    if D is None:
        raise PreconditionFailed("the rotated disk is undefined")
    p = np.asarray(p, float)
    d = np.asarray(q, float) - p
    V = H.vertices()
    cross = d[0] * (V[:, 1] - p[1]) - d[1] * (V[:, 0] - p[0])
    keep = V[cross < 0] if side == "+" else V[cross > 0]
    c = np.asarray(D.center)
    r = D.scale
    pts = np.vstack([keep, p[None, :], np.asarray(q, float)[None, :]])
    dist = np.hypot(pts[:, 0] - c[0], pts[:, 1] - c[1])
    return bool(np.all(dist <= r + tol * max(1.0, r)))


class QNeighborSampler:
    """Q-neighbors of every point along a uniform grid of directions.

    For each grid direction the boundary point zeta of Q and the angles from
    zeta to all vertices are tabulated once; the exit edge of any ray from
    zeta is then a binary search, and the scale of Q_pq(u) follows from
    that edge's line.
    """

    def __init__(self, Q: ConvexBody, resolution: int, offset: float = 0.0):
        if resolution < 4:
            raise InvalidInput("resolution must be at least 4")
        self.Q = Q
        self.R = resolution
        self.offset = offset
        self.angles = offset + TWO_PI * np.arange(resolution) / resolution
        m = Q.m
        back = self.angles + math.pi
        e0 = Q.edge_at(back)
        w = np.stack([np.cos(back), np.sin(back)], axis=1)
        rho = Q.offsets[e0] / np.einsum("ri,ri->r", Q.normals[e0], w)
        zeta = w * rho[:, None]
        self.zeta = zeta
        # vertices in ccw order starting after zeta's edge
        order = (e0[:, None] + 1 + np.arange(m)[None, :]) % m
        V = Q.vertices[order]
        rel = V - zeta[:, None, :]
        ang = np.arctan2(rel[..., 1], rel[..., 0])
        edge_dir = np.arctan2(*(Q.vertices[(e0 + 1) % m] - Q.vertices[e0])[:, ::-1].T)
        self.base = edge_dir
        r = (ang - edge_dir[:, None]) % TWO_PI
        r[:, 0] = 0.0
        r[:, -1] = math.pi
        at_vertex = np.linalg.norm(rel[:, -1, :], axis=1) <= 1e-15
        self.upper = np.where(at_vertex, r[:, -2], math.pi)
        r[at_vertex, -1] = r[at_vertex, -2]
        self.rel = np.maximum.accumulate(r, axis=1)
        self.flat = (self.rel + 4 * math.pi * np.arange(resolution)[:, None]).ravel()
        self.edge_of = (e0[:, None] + np.arange(m)[None, :]) % m
        self.den = Q.offsets[None, :] - zeta @ Q.normals.T

    def scales(self, d: np.ndarray) -> np.ndarray:
        """Scales of Q_pq(u_i) for displacement vectors ``d`` (shape (c, 2)),
        as an array (R, c) with inf where undefined."""
        m = self.Q.m
        R = self.R
        th = np.arctan2(d[:, 1], d[:, 0])
        rel = (th[None, :] - self.base[:, None]) % TWO_PI
        ok = (rel > 0) & (rel < self.upper[:, None])
        rows = np.arange(R)[:, None]
        key = np.clip(rel, 0.0, math.pi) + 4 * math.pi * rows
        pos = np.searchsorted(self.flat, key.ravel()).reshape(key.shape) - rows * m
        pos = np.clip(pos, 1, m - 1)
        e = self.edge_of[rows, pos]
        num = np.einsum("rci,rci->rc", self.Q.normals[e], np.broadcast_to(d, e.shape + (2,)))
        with np.errstate(divide="ignore", invalid="ignore"):
            lam = num / self.den[rows, e]
        return np.where(ok & (lam > 0), lam, np.inf)

    def neighbors(self, points) -> np.ndarray:
        """(n, R) array of Q-neighbor indices, -1 where no homothet exists."""
        pts = as_point_array(points)
        n = len(pts)
        out = np.full((n, self.R), -1, dtype=int)
        for p in range(n):
            others = np.delete(np.arange(n), p)
            lam = self.scales(pts[others] - pts[p])
            best = np.argmin(lam, axis=1)
            fin = np.isfinite(lam[np.arange(self.R), best])
            out[p, fin] = others[best[fin]]
        return out


def contiguous_extent(mask: np.ndarray) -> int:
    """Size of a cyclically contiguous True set; raises if it is split."""
    mask = np.asarray(mask, dtype=bool)
    cnt = int(mask.sum())
    if cnt in (0, len(mask)):
        return cnt
    starts = int(np.sum(mask & ~np.roll(mask, 1)))
    if starts != 1:
        raise InternalInconsistency(f"direction set splits into {starts} runs")
    return cnt


def q_stability_angles(nbrs: np.ndarray, p: int, q: int) -> tuple[float, float]:
    R = nbrs.shape[1]
    step = TWO_PI / R
    return (contiguous_extent(nbrs[p] == q) * step, contiguous_extent(nbrs[q] == p) * step)


def stability_under_q(points, p: int, q: int, Q: ConvexBody,
                      resolution: int = 8192, offset: float = 0.0) -> tuple[float, float]:
    """Sampled angles at which p and q see their common Q-Voronoi edge."""
    if resolution < 4096:
        raise InvalidInput("resolution must be at least 4096")
    nbrs = QNeighborSampler(Q, resolution, offset).neighbors(points)
    return q_stability_angles(nbrs, p, q)
