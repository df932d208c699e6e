"""Verification suites run by ``sdgkit verify``, one seed per task."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor

from .convex_distance import ConvexBody
from .euclid_delaunay import build_delaunay, neighbor_table_euclid
from .generators import generate
from .polygon_metric import RegularKGon, neighbor_table_diamond
from .stable_graph import (
    long_euc_poly_violations,
    long_polyg_euc_violations,
    lower_bound_check,
    proximity_violations,
    sandwich_violations,
    theorem1_violations,
    theorem_4a6a_violations,
)

LOWER_BOUND_ALPHAS = (math.pi / 64, math.pi / 32, math.pi / 16)


def _lists(rows) -> list:
    return [list(r) if isinstance(r, tuple) else r for r in rows]


def run_lemmas(pts, cfg) -> dict:
    dt = build_delaunay(pts)
    euc = neighbor_table_euclid(pts, cfg.k, cfg.offset)
    dia = neighbor_table_diamond(pts, RegularKGon(cfg.k, cfg.offset))
    fwd, bwd = theorem_4a6a_violations(dt, dia, cfg.k)
    return {
        "long_euc_poly": long_euc_poly_violations(euc, dia),
        "long_polyg_euc": long_polyg_euc_violations(euc, dia),
        "theorem_4a6a_forward": fwd,
        "theorem_4a6a_backward": bwd,
    }


def run_poly_stable(pts, cfg) -> dict:
    missing, extra = sandwich_violations(pts, cfg.k, cfg.offset)
    return {"sandwich_missing": missing, "sandwich_extra": extra}


def run_properties(pts, cfg) -> dict:
    dt = build_delaunay(pts)
    alphas = LOWER_BOUND_ALPHAS if cfg.alpha is None else (cfg.alpha,)
    lower = []
    for a in alphas:
        count, bound, ok = lower_bound_check(pts, a, dt)
        if not ok:
            lower.append((a, count, bound))
    return {"lower_bound": lower, "proximity": proximity_violations(pts, dt=dt)}


def run_theorem1(pts, cfg) -> dict:
    Q = ConvexBody.regular(cfg.k, cfg.offset)
    fwd, conv = theorem1_violations(pts, Q, cfg.resolution, cfg.offset)
    return {"forward": fwd, "converse": conv}


RUNNERS = {
    "lemmas": run_lemmas,
    "poly-stable": run_poly_stable,
    "properties": run_properties,
    "theorem1": run_theorem1,
}


def run_seed(cfg, seed: int) -> dict:
    pts = generate(cfg.kind, cfg.n, seed)
    verdicts = RUNNERS[cfg.suite](pts, cfg)
    return {"seed": seed, "verdicts": {k: _lists(v) for k, v in verdicts.items()}}


def run_suite(cfg) -> dict:
    """Run every seed, in worker processes when more than one is allowed.
    Results keep seed order, so the report does not depend on scheduling."""
    seeds = list(range(cfg.seed_base, cfg.seed_base + cfg.seeds))
    workers = cfg.worker_count()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_seed, [cfg] * len(seeds), seeds))
    else:
        results = [run_seed(cfg, s) for s in seeds]
    total = sum(len(v) for r in results for v in r["verdicts"].values())
    return {"suite": cfg.suite, "n": cfg.n, "k": cfg.k, "kind": cfg.kind,
            "alpha": cfg.alpha, "seeds": results, "violations": total}
