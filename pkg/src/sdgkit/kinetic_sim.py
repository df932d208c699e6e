"""Kinetic Delaunay triangulation under polynomial motion.

Every edge of the ghost-augmented triangulation carries a certificate
polynomial in t that is positive while the edge is locally Delaunay:

* interior edge ab with apexes c (left) and d (right): -incircle(a, b, c, d)
* hull edge ab whose right side is the ghost: orient(a, b, c)
* ghost edge (a, ghost) between hull edges c->a and a->d: -orient(c, a, d)

Coordinates are converted exactly to integers (floats are dyadic), so the
certificates are integer polynomials and their failure times are isolated
exactly.  Between combinatorial events the stability of every edge is
scanned on a uniform grid and threshold crossings are located by bisection.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, DegenerateMotion, InvalidInput, OutOfRange
from .euclid_delaunay import (
    GHOST,
    Triangulation,
    build_delaunay,
    triangulation_from_adjacency,
)
from .polyroots import first_crossing, isolate01, pmul, psub, refine, squarefree, to_integer, trim

EVENT_TOL = 1e-10
KINDS = ("flip", "hull_collinearity", "sdg_enter", "sdg_leave")


@dataclass(frozen=True)
class Trajectory:
    """Polynomial motion; coefficients ascending, ``x(t) = sum x[i] t**i``."""

    x: tuple
    y: tuple
    t0: float = 0.0
    t1: float = 1.0
    dmax: int = 3

    def __post_init__(self):
        x = tuple(float(c) for c in self.x) or (0.0,)
        y = tuple(float(c) for c in self.y) or (0.0,)
        if not all(math.isfinite(c) for c in x + y):
            raise InvalidInput("trajectory coefficients must be finite")
        if max(len(x), len(y)) - 1 > self.dmax:
            raise InvalidInput(f"trajectory degree exceeds {self.dmax}")
        if not self.t0 <= self.t1:
            raise InvalidInput("empty validity interval")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def static(cls, p, t0: float = 0.0, t1: float = 1.0) -> "Trajectory":
        return cls((p[0],), (p[1],), t0, t1)

    @classmethod
    def linear(cls, p, v, t0: float = 0.0, t1: float = 1.0) -> "Trajectory":
        return cls((p[0], v[0]), (p[1], v[1]), t0, t1)

    @property
    def degree(self) -> int:
        return max(len(trim(list(self.x))), len(trim(list(self.y))), 1) - 1


def _horner(c: Sequence[float], t: float) -> float:
    acc = 0.0
    for a in reversed(c):
        acc = acc * t + a
    return acc


def position_at(traj: Trajectory, t: float) -> tuple:
    if not traj.t0 <= t <= traj.t1:
        raise OutOfRange(f"t={t} outside [{traj.t0}, {traj.t1}]")
    return (_horner(traj.x, t), _horner(traj.y, t))


def coefficient_array(trajs: Sequence[Trajectory]) -> np.ndarray:
    """(n, 2, d+1) array of ascending coefficients, zero padded."""
    d = max(max(len(tr.x), len(tr.y)) for tr in trajs)
    C = np.zeros((len(trajs), 2, d))
    for i, tr in enumerate(trajs):
        C[i, 0, :len(tr.x)] = tr.x
        C[i, 1, :len(tr.y)] = tr.y
    return C


def positions(trajs, t) -> np.ndarray:
    """Positions of all points at scalar t, or at an array of times
    (result shape ``(len(t), n, 2)``).  ``trajs`` may be a coefficient
    array from :func:`coefficient_array`."""
    C = trajs if isinstance(trajs, np.ndarray) else coefficient_array(trajs)
    t = np.asarray(t, dtype=float)
    powers = t[..., None] ** np.arange(C.shape[2])
    return np.einsum("...k,nck->...nc", powers, C)


def _at(c: np.ndarray, t: float) -> tuple:
    return (_horner(c[0].tolist(), t), _horner(c[1].tolist(), t))


# exact certificate polynomials

class _ExactMotion:
    """Trajectories as integer polynomials sharing one power-of-two scale."""

    def __init__(self, trajs: Sequence[Trajectory]):
        fr = [([Fraction(c) for c in tr.x], [Fraction(c) for c in tr.y]) for tr in trajs]
        den = 1
        for xs, ys in fr:
            for c in xs + ys:
                den = max(den, c.denominator)
        self.X = [trim([int(c * den) for c in xs]) for xs, _ in fr]
        self.Y = [trim([int(c * den) for c in ys]) for _, ys in fr]

    def orient(self, a, b, c) -> list:
        X, Y = self.X, self.Y
        acx, acy = psub(X[a], X[c]), psub(Y[a], Y[c])
        bcx, bcy = psub(X[b], X[c]), psub(Y[b], Y[c])
        return psub(pmul(acx, bcy), pmul(acy, bcx))

    def incircle(self, a, b, c, d) -> list:
        X, Y = self.X, self.Y
        rows = []
        for v in (a, b, c):
            dx, dy = psub(X[v], X[d]), psub(Y[v], Y[d])
            rows.append((dx, dy, trim(_padd(pmul(dx, dx), pmul(dy, dy)))))
        (ax, ay, al), (bx, by, bl), (cx, cy, cl) = rows
        t1 = pmul(al, psub(pmul(bx, cy), pmul(cx, by)))
        t2 = pmul(bl, psub(pmul(cx, ay), pmul(ax, cy)))
        t3 = pmul(cl, psub(pmul(ax, by), pmul(bx, ay)))
        return _padd(_padd(t1, t2), t3)


def _padd(a, b):
    return psub(a, [-c for c in b])


def _neg(p):
    return [-c for c in p]


def _on_interval(p: list, lo: Fraction, hi: Fraction) -> list:
    """Integer polynomial in s with the sign of p(lo + (hi - lo) s)."""
    D = lo.denominator * hi.denominator // gcd(lo.denominator, hi.denominator)
    a = int(lo * D)
    b = int((hi - lo) * D)
    out: list = []
    for i, c in enumerate(reversed(p)):
        # out = out * (a + b s) + c * D**i
        nxt = [0] * (len(out) + 1)
        for j, v in enumerate(out):
            nxt[j] += v * a
            nxt[j + 1] += v * b
        nxt[0] += c * D ** i
        out = nxt
    return to_integer(trim(out))


def next_failure(poly: list, after: float, t1: float, tol: float = EVENT_TOL) -> Optional[float]:
    """Earliest t in (after, t1] at which ``poly`` turns negative."""
    poly = trim(list(poly))
    if not poly:
        raise DegenerateMotion("certificate polynomial vanishes identically")
    if len(poly) == 1 or after >= t1:
        return None
    lo, hi = Fraction(after), Fraction(t1)
    s = _on_interval(poly, lo, hi)
    width = Fraction(tol) / (hi - lo) / 2
    r = first_crossing(s, width)
    if r is None:
        return None
    return float(lo + (hi - lo) * r.mid)


def next_cocircularity(a: Trajectory, b: Trajectory, c: Trajectory, d: Trajectory,
                       after: float, tol: float = EVENT_TOL) -> Optional[float]:
    """Smallest time > after at which the four points are cocircular."""
    trajs = (a, b, c, d)
    t1 = min(tr.t1 for tr in trajs)
    if not max(tr.t0 for tr in trajs) <= after <= t1:
        raise OutOfRange("after lies outside the validity interval")
    poly = _ExactMotion(trajs).incircle(0, 1, 2, 3)
    if not poly:
        raise DegenerateMotion("the four points stay cocircular", (0, 1, 2, 3))
    return _first_root(poly, after, t1, tol)


def _first_root(poly, after, t1, tol) -> Optional[float]:
    """First root in (after, t1], whether or not the sign changes there."""
    if len(poly) == 1 or after >= t1:
        return None
    lo, hi = Fraction(after), Fraction(t1)
    s = _on_interval(poly, lo, hi)
    sq = squarefree(s)
    for r in isolate01(s):
        if r.exact and r.num == 0:
            continue
        r = refine(sq, r, Fraction(tol) / (hi - lo) / 2)
        return float(lo + (hi - lo) * r.mid)
    return None


# event log

@dataclass(frozen=True)
class KineticEvent:
    time: float
    kind: str
    participants: tuple
    quad: Optional[tuple] = None
    root: Optional[dict] = None

    def to_dict(self) -> dict:
        d = {"time": self.time, "kind": self.kind, "participants": list(self.participants)}
        if self.quad is not None:
            d["quad"] = list(self.quad)
        if self.root is not None:
            d["root"] = self.root
        return d


@dataclass
class EventLog:
    trajectories: list
    t0: float
    t1: float
    alpha: float
    hysteresis: float
    initial_adjacency: dict
    events: list = field(default_factory=list)
    final: Optional[Triangulation] = None
    event_tol: float = EVENT_TOL

    @property
    def counters(self) -> dict:
        c = {k: 0 for k in KINDS}
        for e in self.events:
            c[e.kind] += 1
        return c

    def combinatorial(self) -> list:
        return [e for e in self.events if e.quad is not None]

    def adjacency_at(self, t: float) -> dict:
        adj = dict(self.initial_adjacency)
        for e in self.combinatorial():
            if e.time > t:
                break
            _flip(adj, *e.quad)
        return adj

    def triangulation_at(self, t: float) -> Triangulation:
        """Replay combinatorial events up to time t."""
        if not self.t0 <= t <= self.t1:
            raise OutOfRange(f"t={t} outside [{self.t0}, {self.t1}]")
        return triangulation_from_adjacency(positions(self.trajectories, t), self.adjacency_at(t))

    def to_dict(self) -> dict:
        return {
            "t0": self.t0, "t1": self.t1, "alpha": self.alpha, "hysteresis": self.hysteresis,
            "counters": self.counters,
            "events": [e.to_dict() for e in self.events],
            "final_triangles": [list(t) for t in self.final.triangles] if self.final else None,
        }


def _add(adj, a, b, c):
    adj[(a, b)] = c
    adj[(b, c)] = a
    adj[(c, a)] = b


def _remove(adj, a, b, c):
    del adj[(a, b)]
    del adj[(b, c)]
    del adj[(c, a)]


def _flip(adj, a, b, c, d):
    """Replace triangles (a, b, c), (b, a, d) by (a, d, c), (d, b, c)."""
    _remove(adj, a, b, c)
    _remove(adj, b, a, d)
    _add(adj, a, d, c)
    _add(adj, d, b, c)


def _ekey(u, v):
    return (u, v) if u < v else (v, u)


class _Kinetic:
    def __init__(self, trajs, t0, t1, alpha, hysteresis, max_events, scan_cells):
        self.trajs = list(trajs)
        self.coef = coefficient_array(self.trajs)
        self.exact = _ExactMotion(self.trajs)
        self.t0, self.t1 = t0, t1
        self.alpha, self.hyst = alpha, hysteresis
        self.max_events = max_events
        self.cells = scan_cells
        dt = build_delaunay(positions(self.trajs, t0))
        self.adj = dict(dt.adjacency)
        self.initial = dict(dt.adjacency)
        self.heap: list = []
        self.version: dict = {}
        self.seq = 0
        self.events: list = []
        for (u, v) in list(self.adj):
            if u < v:
                self.schedule(_ekey(u, v), t0)
        stab = self.stabilities(np.array([t0]), self.real_edges())[:, 0]
        self.member = {e: bool(s >= alpha) for e, s in zip(self.real_edges(), stab)}

    # certificates
    def quad(self, key):
        u, v = key
        a, b = (v, u) if u == GHOST else (u, v)
        return a, b, self.adj[(a, b)], self.adj[(b, a)]

    def certificate(self, a, b, c, d) -> list:
        ex = self.exact
        if b == GHOST:
            return _neg(ex.orient(c, a, d))
        if c == GHOST:
            return ex.orient(b, a, d)
        if d == GHOST:
            return ex.orient(a, b, c)
        return _neg(ex.incircle(a, b, c, d))

    def schedule(self, key, now):
        # versions are globally unique so that a re-created edge never
        # revives a stale heap entry
        self.seq += 1
        ver = self.seq
        self.version[key] = ver
        a, b, c, d = self.quad(key)
        poly = self.certificate(a, b, c, d)
        if not poly:
            raise DegenerateMotion("certificate vanishes identically",
                                   tuple(x for x in (a, b, c, d) if x != GHOST))
        t = next_failure(poly, now, self.t1)
        if t is not None:
            heapq.heappush(self.heap, (t, self.seq, key, ver))
            self.seq += 1

    def pop(self):
        while self.heap:
            t, _, key, ver = heapq.heappop(self.heap)
            if self.version.get(key) == ver:
                return t, key
        return None

    def peek(self):
        while self.heap:
            t, _, key, ver = self.heap[0]
            if self.version.get(key) == ver:
                return t, key
            heapq.heappop(self.heap)
        return None

    # stability
    def real_edges(self) -> list:
        return sorted({_ekey(u, v) for (u, v) in self.adj if u != GHOST and v != GHOST})

    def stabilities(self, ts: np.ndarray, edges: list) -> np.ndarray:
        """(len(edges), len(ts)) stability angles with the current apexes."""
        if not edges:
            return np.zeros((0, len(ts)))
        pos = positions(self.coef, ts)  # (T, n, 2)
        E = np.array(edges)
        A, B = E[:, 0], E[:, 1]
        total = np.zeros((len(edges), len(ts)))
        for apex in (np.array([self.adj[(a, b)] for a, b in edges]),
                     np.array([self.adj[(b, a)] for a, b in edges])):
            real = apex != GHOST
            if not real.any():
                continue
            r = apex[real]
            u = pos[:, A[real]] - pos[:, r]
            v = pos[:, B[real]] - pos[:, r]
            cross = np.abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])
            dot = u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1]
            total[real] += np.arctan2(cross, dot).T
        return np.clip(math.pi - total, 0.0, math.pi)

    def scan(self, ta: float, tb: float):
        """Emit SDG membership changes in [ta, tb] under the current triangulation."""
        if tb <= ta:
            return
        edges = self.real_edges()
        ts = np.linspace(ta, tb, self.cells + 1)
        S = self.stabilities(ts, edges)
        lo, hi = self.alpha, self.hyst * self.alpha
        out = []
        for i, e in enumerate(edges):
            row = S[i]
            inside = self.member.get(e, False)
            if inside and row.min() >= lo:
                continue
            if not inside and row.max() < hi:
                continue
            j = 0
            while j < self.cells:
                if inside:
                    hit = np.flatnonzero(row[j + 1:] < lo)
                else:
                    hit = np.flatnonzero(row[j + 1:] >= hi)
                if not len(hit):
                    break
                j = j + 1 + int(hit[0])
                t = self.bisect(e, ts[j - 1], ts[j], lo if inside else hi, inside)
                inside = not inside
                out.append((t, "sdg_enter" if inside else "sdg_leave", e))
            self.member[e] = inside
        out.sort()
        for t, kind, e in out:
            self.events.append(KineticEvent(float(t), kind, e))

    def edge_stability(self, e, t: float) -> float:
        a, b = e
        C = self.coef
        total = 0.0
        pa, pb = _at(C[a], t), _at(C[b], t)
        for r in (self.adj[(a, b)], self.adj[(b, a)]):
            if r != GHOST:
                pr = _at(C[r], t)
                ux, uy = pa[0] - pr[0], pa[1] - pr[1]
                vx, vy = pb[0] - pr[0], pb[1] - pr[1]
                total += math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)
        return min(math.pi, max(0.0, math.pi - total))

    def bisect(self, e, a, b, thr, falling) -> float:
        def f(t):
            return self.edge_stability(e, t)
        while b - a > 1e-9:
            m = 0.5 * (a + b)
            if (f(m) < thr) == falling:
                b = m
            else:
                a = m
        return b

    def run(self):
        now = self.t0
        n_comb = 0
        while True:
            top = self.pop()
            if top is None:
                break
            t, key = top
            nxt = self.peek()
            if nxt is not None and nxt[0] - t < EVENT_TOL:
                raise DegenerateMotion(f"simultaneous events at t={t}",
                                       tuple(x for x in key + nxt[1] if x != GHOST))
            n_comb += 1
            if n_comb > self.max_events:
                raise BudgetExceeded(f"more than {self.max_events} combinatorial events")
            self.scan(now, t)
            a, b, c, d = self.quad(key)
            _flip(self.adj, a, b, c, d)
            kind = "flip" if GHOST not in (a, b, c, d) else "hull_collinearity"
            self.events.append(KineticEvent(
                float(t), kind, tuple(x for x in (a, b, c, d) if x != GHOST), (a, b, c, d),
                {"tolerance": EVENT_TOL}))
            old = _ekey(a, b)
            self.version.pop(old, None)
            self.member.pop(old, None)
            new = _ekey(c, d)
            if GHOST not in new:
                self.member[new] = False
            for k in (new, _ekey(a, c), _ekey(c, b), _ekey(b, d), _ekey(d, a)):
                self.schedule(k, t)
            now = t
        self.scan(now, self.t1)


def simulate(trajs: Sequence[Trajectory], t0: float, t1: float, alpha: float,
             hysteresis: float = 2.0, max_events: int = 100_000,
             scan_cells: int = 64) -> EventLog:
    """Maintain the Delaunay triangulation of moving points over [t0, t1]."""
    trajs = list(trajs)
    if not trajs:
        raise InvalidInput("no trajectories")
    if any(tr.t0 > t0 or tr.t1 < t1 for tr in trajs):
        raise OutOfRange("simulation interval exceeds a trajectory's validity interval")
    if not t0 < t1:
        raise InvalidInput("need t0 < t1")
    if not 0 < alpha < math.pi or hysteresis < 1:
        raise InvalidInput("need 0 < alpha < pi and hysteresis >= 1")
    k = _Kinetic(trajs, t0, t1, alpha, hysteresis, max_events, scan_cells)
    k.run()
    log = EventLog(trajs, t0, t1, alpha, hysteresis, k.initial, k.events)
    log.final = triangulation_from_adjacency(positions(trajs, t1), k.adj)
    return log


@dataclass(frozen=True)
class EventSummary:
    counts: dict
    sdg_per_flip: Optional[float]

    def csv_row(self, **extra) -> str:
        buf = io.StringIO()
        fields = list(extra) + list(KINDS) + ["sdg_per_flip"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        row = dict(extra, **self.counts)
        row["sdg_per_flip"] = "" if self.sdg_per_flip is None else f"{self.sdg_per_flip:.6f}"
        w.writerow(row)
        return buf.getvalue()


def event_report(log: EventLog) -> EventSummary:
    c = log.counters
    flips = c["flip"] + c["hull_collinearity"]
    sdg = c["sdg_enter"] + c["sdg_leave"]
    return EventSummary(c, sdg / flips if flips else None)
