"""Point-set generators, including the adversarial constructions."""

from __future__ import annotations

import math
import numpy as np

from .errors import InvalidInput

KINDS = ("uniform", "grid", "near-cocircular", "rng-gadget", "isolated-vertex")


def uniform(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.random((n, 2))


def grid(n: int, rng: np.random.Generator, jitter: float = 1e-3) -> np.ndarray:
    """Two long horizontal rows, far apart relative to their spacing.

    The Delaunay triangulation zigzags between the rows, and almost every
    edge is a long near-vertical rung that is highly stable.  The jitter
    breaks collinearity and cocircularity.
    """
    top = n // 2
    bottom = n - top
    height = float(max(top, bottom))
    pts = [(i + 0.5 * (top > bottom), 0.0) for i in range(bottom)]
    pts += [(i + 0.5, height) for i in range(top)]
    arr = np.array(pts, dtype=float)
    return arr + rng.uniform(-jitter, jitter, arr.shape)


def near_cocircular(n: int, rng: np.random.Generator, jitter: float = 1e-6) -> np.ndarray:
    ang = np.sort(rng.uniform(0.0, 2 * math.pi, n))
    r = 1.0 + rng.uniform(-jitter, jitter, n)
    return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)


def rng_gadget(n: int, rng: np.random.Generator, phi: float = 0.02) -> np.ndarray:
    """An RNG edge ab that is barely Delaunay-stable.

    Two points r+ and r- sit just outside the lune of ab, on circles of
    radius slightly above |ab| around a, at angle phi above and below ab.
    Each sees ab at about pi/2 - phi/2, so ab is in the RNG while its
    stability is only about phi.  Remaining points are spread far away.
    """
    if n < 4:
        raise InvalidInput("the gadget needs at least 4 points")
    a, b = (-1.0, 0.0), (1.0, 0.0)
    rp = (-1.0 + 2.000002 * math.cos(phi), 2.000002 * math.sin(phi))
    rm = (-1.0 + 2.000004 * math.cos(phi * 1.01), -2.000004 * math.sin(phi * 1.01))
    pts = [a, b, rp, rm]
    m = n - 4
    if m:
        ang = rng.uniform(0, 2 * math.pi, m)
        rad = rng.uniform(6.0, 12.0, m)
        pts += list(zip(rad * np.cos(ang), rad * np.sin(ang)))
    return np.array(pts, dtype=float)


def isolated_vertex(n: int, rng: np.random.Generator, jitter: float = 1e-9) -> np.ndarray:
    """A center surrounded by a fine ring: every spoke has stability about
    2*pi/(n-1), so for larger alpha the center is isolated in the SDG."""
    if n < 4:
        raise InvalidInput("the wheel needs at least 4 points")
    m = n - 1
    ang = 2 * math.pi * np.arange(m) / m + rng.uniform(-jitter, jitter, m)
    r = 1.0 + rng.uniform(-jitter, jitter, m)
    ring = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)
    return np.vstack([[0.0, 0.0], ring])


_GEN = {
    "uniform": uniform,
    "grid": grid,
    "near-cocircular": near_cocircular,
    "rng-gadget": rng_gadget,
    "isolated-vertex": isolated_vertex,
}


def generate(kind: str, n: int, seed: int) -> np.ndarray:
    if kind not in _GEN:
        raise InvalidInput(f"unknown generator {kind!r}")
    if n < 3:
        raise InvalidInput("need n >= 3")
    return _GEN[kind](n, np.random.default_rng(seed))


def random_trajectories(points: np.ndarray, degree: int, seed: int,
                        speed: float = 0.5) -> list:
    """Random polynomial motions starting at ``points``, as coefficient dicts."""
    rng = np.random.default_rng([seed, degree])
    out = []
    for x, y in np.asarray(points).tolist():
        cx = [x] + (speed * rng.normal(size=degree)).tolist()
        cy = [y] + (speed * rng.normal(size=degree)).tolist()
        out.append({"x": cx, "y": cy})
    return out


def perturbed_square(eps: float = 1e-6) -> np.ndarray:
    """Unit square with one corner nudged outward by eps."""
    return np.array([(0.0, 0.0), (1.0, 0.0), (1.0 + eps, 1.0 + eps), (0.0, 1.0)])


def kinetic_square() -> list:
    """Three fixed corners of the unit square and a fourth point moving
    along y = 1; it crosses the circumcircle at t = 1."""
    return [
        {"x": [0.0], "y": [0.0]},
        {"x": [1.0], "y": [0.0]},
        {"x": [0.0], "y": [1.0]},
        {"x": [0.0, 1.0], "y": [1.0]},
    ]
