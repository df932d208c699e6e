"""Per-command configuration.  Field names match the CLI flag destinations,
so a ``--config`` JSON file can set any flag."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields
from typing import Optional

from .errors import InvalidInput
from .generators import KINDS as GEN_KINDS
from .render import LAYERS

SUITES = ("lemmas", "theorem1", "poly-stable", "properties")


def _fields(cls) -> set:
    return {f.name for f in fields(cls)}


def from_namespace(cls, ns):
    cfg = cls(**{k: v for k, v in vars(ns).items() if k in _fields(cls)})
    cfg.validate()
    return cfg


@dataclass
class SdgConfig:
    input: str = "-"
    out: str = "-"
    alpha: Optional[float] = None
    method: str = "euclid"
    k: int = 64
    offset: float = 0.0

    def validate(self):
        if self.method not in ("euclid", "proxy"):
            raise InvalidInput(f"unknown method {self.method!r}")
        if self.method == "euclid":
            if self.alpha is None:
                raise InvalidInput("--alpha is required for the euclid method")
            if not 0 < self.alpha < math.pi:
                raise InvalidInput("alpha must lie in (0, pi)")


@dataclass
class VerifyConfig:
    suite: Optional[str] = None
    seeds: int = 50
    seed_base: int = 0
    n: int = 200
    k: int = 64
    alpha: Optional[float] = None
    kind: str = "uniform"
    resolution: int = 8192
    offset: float = 0.0
    out: str = "-"
    workers: Optional[int] = None

    def validate(self):
        if self.suite not in SUITES:
            raise InvalidInput(f"--suite must be one of {', '.join(SUITES)}")
        if self.seeds < 1 or self.n < 3:
            raise InvalidInput("need seeds >= 1 and n >= 3")
        if self.k < 8 or self.k % 2:
            raise InvalidInput("k must be even and at least 8")
        if self.suite == "poly-stable" and self.k < 24:
            raise InvalidInput("the poly-stable suite needs k >= 24")
        if self.alpha is not None and not 0 < self.alpha < math.pi / 6:
            raise InvalidInput("alpha must lie in (0, pi/6)")
        if self.kind not in GEN_KINDS:
            raise InvalidInput(f"unknown kind {self.kind!r}")

    def worker_count(self) -> int:
        cap = os.environ.get("SDGKIT_THREADS")
        n = self.workers or os.cpu_count() or 1
        if cap:
            try:
                n = min(n, max(1, int(cap)))
            except ValueError:
                raise InvalidInput("SDGKIT_THREADS must be an integer") from None
        return max(1, min(n, self.seeds))


@dataclass
class KineticConfig:
    input: str = "-"
    out: str = "-"
    summary: Optional[str] = None
    t0: float = 0.0
    t1: float = 1.0
    alpha: Optional[float] = None
    hysteresis: float = 2.0
    max_events: int = 100_000
    scan_cells: int = 64

    def validate(self):
        if self.alpha is None:
            raise InvalidInput("--alpha is required")
        if not self.t0 < self.t1:
            raise InvalidInput("need t0 < t1")
        if self.scan_cells < 1 or self.max_events < 0:
            raise InvalidInput("scan cells and event budget must be positive")


@dataclass
class PlotConfig:
    input: str = "-"
    out: str = "-"
    layers: str = "dt"
    alpha: float = math.pi / 8
    beta: float = 1.0
    k: int = 8
    size: int = 800

    def layer_tuple(self) -> tuple:
        return tuple(l.strip() for l in self.layers.split(",") if l.strip())

    def validate(self):
        bad = [l for l in self.layer_tuple() if l not in LAYERS]
        if bad:
            raise InvalidInput(f"unknown layers {bad}")
        if self.size < 16:
            raise InvalidInput("size must be at least 16")


@dataclass
class GenConfig:
    kind: str = "uniform"
    n: Optional[int] = None
    seed: int = 0
    degree: int = 0
    speed: float = 0.5
    out: str = "-"

    def validate(self):
        if self.kind not in GEN_KINDS:
            raise InvalidInput(f"unknown kind {self.kind!r}")
        if self.n is None or self.n < 3:
            raise InvalidInput("--n (at least 3) is required")
        if not 0 <= self.degree <= 3:
            raise InvalidInput("degree must lie in [0, 3]")


CONFIGS = {
    "sdg": SdgConfig,
    "verify": VerifyConfig,
    "kinetic": KineticConfig,
    "plot": PlotConfig,
    "gen": GenConfig,
}
