"""Exact-sign predicates and angle arithmetic.

Orientation and incircle signs use a floating-point filter (Shewchuk's
static error bounds) and fall back to exact rational arithmetic when the
filter cannot certify the sign.  A zero result is therefore a true
degeneracy, never a rounding artefact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateTriangle, InvalidInput

Point = tuple[float, float]

TWO_PI = 2.0 * math.pi

_EPS = 2.0 ** -53
_CCW_BOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_BOUND = (10.0 + 96.0 * _EPS) * _EPS


def _xy(pt: Sequence[float]) -> tuple[float, float]:
    x, y = float(pt[0]), float(pt[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInput(f"non-finite coordinate in {pt!r}")
    return x, y


def _sign(v) -> int:
    return int(v > 0) - int(v < 0)


def orient_raw(ax, ay, bx, by, cx, cy) -> int:
    """Orientation sign on already-validated float coordinates."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if abs(det) > _CCW_BOUND * (abs(detleft) + abs(detright)):
        return _sign(det)
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (ax, ay, bx, by, cx, cy))
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def incircle_raw(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    """Incircle determinant sign without the collinearity check."""
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy

    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy

    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if abs(det) > _ICC_BOUND * permanent:
        return _sign(det)
    return _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy)


def _incircle_exact(ax, ay, bx, by, cx, cy, dx, dy) -> int:
    ax, ay, bx, by, cx, cy, dx, dy = map(Fraction, (ax, ay, bx, by, cx, cy, dx, dy))
    adx, ady = ax - dx, ay - dy
    bdx, bdy = bx - dx, by - dy
    cdx, cdy = cx - dx, cy - dy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdx * cdy - cdx * bdy)
           + blift * (cdx * ady - adx * cdy)
           + clift * (adx * bdy - bdx * ady))
    return _sign(det)


def orientation(a: Sequence[float], b: Sequence[float], c: Sequence[float]) -> int:
    """Return +1 if ``c`` is strictly left of the directed line ``ab``,
    -1 if strictly right and 0 if the three points are collinear."""
    return orient_raw(*_xy(a), *_xy(b), *_xy(c))


def incircle(a, b, c, d) -> int:
    """Sign of the incircle determinant.

    For a counterclockwise triangle ``abc`` the result is +1 when ``d`` lies
    strictly inside its circumcircle, 0 when the four points are cocircular
    and -1 outside.  A clockwise ``abc`` flips the sign (the determinant is
    alternating in its arguments).
    """
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    dx, dy = _xy(d)
    if orient_raw(ax, ay, bx, by, cx, cy) == 0:
        raise DegenerateTriangle(f"collinear triangle {a!r}, {b!r}, {c!r}")
    return incircle_raw(ax, ay, bx, by, cx, cy, dx, dy)


def angle_at(r, p, q) -> float:
    """The angle prq in [0, pi] seen from ``r``."""
    rx, ry = _xy(r)
    px, py = _xy(p)
    qx, qy = _xy(q)
    ux, uy = px - rx, py - ry
    vx, vy = qx - rx, qy - ry
    if (ux == 0.0 and uy == 0.0) or (vx == 0.0 and vy == 0.0):
        raise InvalidInput("angle_at needs r distinct from p and q")
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


def circumcenter(a, b, c) -> Point:
    ax, ay = _xy(a)
    bx, by = _xy(b)
    cx, cy = _xy(c)
    bx, by, cx, cy = bx - ax, by - ay, cx - ax, cy - ay
    d = 2.0 * (bx * cy - by * cx)
    if d == 0.0:
        raise DegenerateTriangle("collinear points have no circumcenter")
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    return (ax + (cy * b2 - by * c2) / d, ay + (bx * c2 - cx * b2) / d)


def normalize_angle(theta: float) -> float:
    """Map ``theta`` to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0.0:
        t += TWO_PI
    if t >= TWO_PI:
        t = 0.0
    return t


def wrap_pi(theta):
    """Map angles (scalar or array) to [-pi, pi)."""
    return (theta + math.pi) % TWO_PI - math.pi


@dataclass(frozen=True)
class Direction:
    """A unit direction stored as an angle in [0, 2*pi).

    ``cw(theta)`` is the rotation written ``u + theta`` in the clockwise
    convention used for the direction grid; ``ccw`` is its inverse.
    """

    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise InvalidInput("direction angle must be finite")
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    @classmethod
    def of(cls, vec: Sequence[float]) -> "Direction":
        x, y = _xy(vec)
        if x == 0.0 and y == 0.0:
            raise InvalidInput("zero vector has no direction")
        return cls(math.atan2(y, x))

    @property
    def vector(self) -> Point:
        return (math.cos(self.angle), math.sin(self.angle))

    def cw(self, theta: float) -> "Direction":
        return Direction(self.angle - theta)

    def ccw(self, theta: float) -> "Direction":
        return Direction(self.angle + theta)

    def __add__(self, theta: float) -> "Direction":
        return self.cw(theta)

    def __sub__(self, theta: float) -> "Direction":
        return self.ccw(theta)


def as_direction(u) -> Direction:
    if isinstance(u, Direction):
        return u
    return Direction(float(u))


def angle_between(u, v) -> float:
    """Unsigned angle in [0, pi] between two vectors."""
    ux, uy = float(u[0]), float(u[1])
    vx, vy = float(v[0]), float(v[1])
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)
