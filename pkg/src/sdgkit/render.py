"""Deterministic SVG rendering of triangulations, Voronoi diagrams and
stable subgraphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidSpec
from .euclid_delaunay import Triangulation, as_point_array, build_delaunay, voronoi_edge
from .polygon_metric import RegularKGon, bisector_diamond
from .stable_graph import beta_skeleton, sdg_euclidean

LAYERS = ("dt", "vd", "sdg", "bisector", "skeleton")

DEFAULT_COLORS = {
    "dt": "#444444",
    "vd": "#1f77b4",
    "sdg": "#d62728",
    "bisector": "#2ca02c",
    "skeleton": "#9467bd",
    "point": "#000000",
}
DEFAULT_WIDTHS = {"dt": 1.0, "vd": 1.0, "sdg": 2.0, "bisector": 1.5, "skeleton": 1.0}


@dataclass
class RenderSpec:
    layers: tuple = ("dt",)
    colors: dict = field(default_factory=lambda: dict(DEFAULT_COLORS))
    widths: dict = field(default_factory=lambda: dict(DEFAULT_WIDTHS))
    viewport: Optional[tuple] = None  # (xmin, ymin, xmax, ymax) in data units
    size: int = 800
    margin: float = 20.0
    point_radius: float = 3.0

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise InvalidSpec("at least one layer is required")
        bad = [l for l in layers if l not in LAYERS]
        if bad:
            raise InvalidSpec(f"unknown layers {bad}")
        # canonical order keeps the output independent of how layers were listed
        self.layers = tuple(l for l in LAYERS if l in layers)
        if self.viewport is not None:
            x0, y0, x1, y1 = self.viewport
            if not (x1 > x0 and y1 > y0):
                raise InvalidSpec("empty viewport")


@dataclass
class Structures:
    """Geometry to draw; only the fields needed by the chosen layers are set."""

    dt: Triangulation
    sdg: Optional[set] = None
    skeleton: Optional[set] = None
    bisectors: list = field(default_factory=list)


def compute_structures(points, layers, alpha: float = math.pi / 8, beta: float = 1.0,
                       k: int = 8, bisector_pairs: Optional[list] = None) -> Structures:
    """Compute what ``layers`` need.  Bisectors default to every SDG edge."""
    pts = as_point_array(points)
    dt = build_delaunay(pts)
    s = Structures(dt)
    if "sdg" in layers or "bisector" in layers:
        s.sdg = sdg_euclidean(pts, alpha, dt).edge_set
    if "skeleton" in layers:
        s.skeleton = beta_skeleton(pts, beta)
    if "bisector" in layers:
        Q = RegularKGon(k)
        pairs = sorted(s.sdg) if bisector_pairs is None else bisector_pairs
        s.bisectors = [bisector_diamond(pts[p], pts[q], Q) for p, q in pairs]
    return s


def _fmt(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


class _Canvas:
    def __init__(self, pts: np.ndarray, spec: RenderSpec):
        if spec.viewport is not None:
            x0, y0, x1, y1 = (float(v) for v in spec.viewport)
        else:
            x0, y0 = pts.min(axis=0).tolist()
            x1, y1 = pts.max(axis=0).tolist()
            pad = 0.05 * max(x1 - x0, y1 - y0, 1e-12)
            x0, y0, x1, y1 = x0 - pad, y0 - pad, x1 + pad, y1 + pad
        self.x0, self.y1 = x0, y1
        self.box = (x0, y0, x1, y1)
        inner = spec.size - 2 * spec.margin
        self.scale = inner / max(x1 - x0, y1 - y0)
        self.margin = spec.margin
        self.width = (x1 - x0) * self.scale + 2 * spec.margin
        self.height = (y1 - y0) * self.scale + 2 * spec.margin

    def xy(self, p) -> tuple:
        # y axis flipped so the picture reads in the usual orientation
        return ((p[0] - self.x0) * self.scale + self.margin,
                (self.y1 - p[1]) * self.scale + self.margin)

    def far(self, start, direction) -> tuple:
        """A point on the ray far enough to leave the viewport."""
        x0, y0, x1, y1 = self.box
        reach = math.hypot(x1 - x0, y1 - y0) + math.hypot(start[0] - (x0 + x1) / 2,
                                                         start[1] - (y0 + y1) / 2)
        return (start[0] + reach * direction[0], start[1] + reach * direction[1])


def _line(cv: _Canvas, a, b, attrs: str) -> str:
    (ax, ay), (bx, by) = cv.xy(a), cv.xy(b)
    return (f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}"'
            f'{attrs}/>')


def _stroke(spec: RenderSpec, layer: str, dash: Optional[str] = None) -> str:
    s = f' stroke="{spec.colors.get(layer, "#000000")}" stroke-width="{_fmt(spec.widths.get(layer, 1.0))}"'
    return s + (f' stroke-dasharray="{dash}"' if dash else "")


def render_svg(points, structures: Structures, spec: RenderSpec) -> bytes:
    """SVG bytes; coordinates carry six decimals and elements are ordered by
    layer, then by sorted edge."""
    pts = as_point_array(points)
    cv = _Canvas(pts, spec)
    P = pts.tolist()
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(cv.width)}" '
        f'height="{_fmt(cv.height)}" viewBox="0 0 {_fmt(cv.width)} {_fmt(cv.height)}">',
        '<rect width="100%" height="100%" fill="#ffffff"/>',
    ]
    edges = sorted(structures.dt.edges)
    for layer in spec.layers:
        out.append(f'<g id="{layer}" fill="none">')
        if layer == "dt":
            # with an SDG on top, the remaining Delaunay edges are dotted
            sdg = structures.sdg if "sdg" in spec.layers else None
            attrs = _stroke(spec, "dt", "2,3" if sdg is not None else None)
            for p, q in edges:
                if sdg is None or (p, q) not in sdg:
                    out.append(_line(cv, P[p], P[q], f' data-p="{p}" data-q="{q}"{attrs}'))
        elif layer == "sdg":
            attrs = _stroke(spec, "sdg")
            for p, q in sorted(structures.sdg or ()):
                out.append(_line(cv, P[p], P[q], f' data-p="{p}" data-q="{q}"{attrs}'))
        elif layer == "vd":
            attrs = _stroke(spec, "vd", "1,3")
            for p, q in edges:
                ve = voronoi_edge(structures.dt, (p, q))
                end = ve.end if ve.end is not None else cv.far(ve.start, ve.direction)
                out.append(_line(cv, ve.start, end, f' data-p="{p}" data-q="{q}"{attrs}'))
        elif layer == "skeleton":
            attrs = _stroke(spec, "skeleton")
            for p, q in sorted(structures.skeleton or ()):
                out.append(_line(cv, P[p], P[q], f' data-p="{p}" data-q="{q}"{attrs}'))
        elif layer == "bisector":
            attrs = _stroke(spec, "bisector")
            for chain in structures.bisectors:
                bp = [cv.xy(b.center) for b in chain.breakpoints]
                if not bp:
                    continue
                coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in bp)
                out.append(f'<polyline points="{coords}"{attrs}/>')
        out.append("</g>")
    out.append(f'<g id="points" fill="{spec.colors.get("point", "#000000")}">')
    for i, p in enumerate(P):
        x, y = cv.xy(p)
        out.append(f'<circle data-i="{i}" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(spec.point_radius)}"/>')
    out.append("</g>")
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
