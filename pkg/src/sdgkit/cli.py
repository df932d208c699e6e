"""Command-line interface: ``sdgkit {sdg,verify,kinetic,plot,gen}``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import config as C
from .documents import InputDocument, dumps, parse_input, write_atomic
from .errors import SdgError
from .euclid_delaunay import as_point_array
from .generators import KINDS as GEN_KINDS, generate, random_trajectories
from .kinetic_sim import Trajectory, event_report, simulate
from .render import RenderSpec, compute_structures, render_svg
from .stable_graph import sdg_euclidean, sdg_proxy
from .suites import run_suite


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as f:
        return f.read()


def _write(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        write_atomic(path, data)


def cmd_sdg(cfg: C.SdgConfig) -> int:
    doc = parse_input(_read(cfg.input))
    pts = as_point_array(doc.points)
    if cfg.method == "euclid":
        report = sdg_euclidean(pts, cfg.alpha)
    else:
        report = sdg_proxy(pts, cfg.k, cfg.offset)
    out = report.to_dict()
    out["n"] = len(pts)
    out["edge_count"] = len(report.edges)
    _write(cfg.out, dumps(out))
    return 0


def cmd_verify(cfg: C.VerifyConfig) -> int:
    report = run_suite(cfg)
    _write(cfg.out, dumps(report))
    return 1 if report["violations"] else 0


def cmd_kinetic(cfg: C.KineticConfig) -> int:
    doc = parse_input(_read(cfg.input))
    if doc.trajectories is None:
        trajs = [Trajectory.static(p, cfg.t0, cfg.t1) for p in doc.points]
    else:
        trajs = [Trajectory(t["x"], t["y"], cfg.t0, cfg.t1) for t in doc.trajectories]
    log = simulate(trajs, cfg.t0, cfg.t1, cfg.alpha, cfg.hysteresis,
                   cfg.max_events, cfg.scan_cells)
    summary = event_report(log)
    out = log.to_dict()
    out["sdg_per_flip"] = summary.sdg_per_flip
    _write(cfg.out, dumps(out))
    if cfg.summary:
        header = ",".join(["n", "t0", "t1", "alpha", *summary.counts, "sdg_per_flip"]) + "\n"
        row = summary.csv_row(n=len(trajs), t0=cfg.t0, t1=cfg.t1, alpha=cfg.alpha)
        _write(cfg.summary, (header + row).encode("utf-8"))
    return 0


def cmd_plot(cfg: C.PlotConfig) -> int:
    doc = parse_input(_read(cfg.input))
    spec = RenderSpec(layers=cfg.layer_tuple(), size=cfg.size)
    pts = as_point_array(doc.points)
    s = compute_structures(pts, spec.layers, alpha=cfg.alpha, beta=cfg.beta, k=cfg.k)
    _write(cfg.out, render_svg(pts, s, spec))
    return 0


def cmd_gen(cfg: C.GenConfig) -> int:
    pts = generate(cfg.kind, cfg.n, cfg.seed)
    trajs = random_trajectories(pts, cfg.degree, cfg.seed, cfg.speed) if cfg.degree else None
    doc = InputDocument(pts.tolist(), trajs, None, {"seed": cfg.seed, "label": cfg.kind})
    _write(cfg.out, dumps(doc.to_json()))
    return 0


COMMANDS = {"sdg": cmd_sdg, "verify": cmd_verify, "kinetic": cmd_kinetic,
            "plot": cmd_plot, "gen": cmd_gen}


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="sdgkit", description="Stable Delaunay graph toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    def add(name, help_):
        # suppressed defaults: unset flags fall back to --config, then to the dataclass
        p = sub.add_parser(name, help=help_, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="JSON file whose keys mirror the long flags")
        subs[name] = p
        return p

    p = add("sdg", "extract a stable Delaunay graph")
    p.add_argument("--input", help="JSON or CSV input (default stdin)")
    p.add_argument("--out", help="report JSON (default stdout)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--method", choices=["euclid", "proxy"])
    p.add_argument("--k", type=int)
    p.add_argument("--offset", type=float)

    p = add("verify", "run a verification suite over seeded corpora")
    p.add_argument("--suite", choices=list(C.SUITES))
    p.add_argument("--seeds", type=int)
    p.add_argument("--seed-base", dest="seed_base", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--kind", choices=list(GEN_KINDS))
    p.add_argument("--resolution", type=int, help="direction samples for theorem1")
    p.add_argument("--offset", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="violation report JSON (default stdout)")

    p = add("kinetic", "maintain the Delaunay triangulation of moving points")
    p.add_argument("--input")
    p.add_argument("--out", help="event log JSON (default stdout)")
    p.add_argument("--summary", help="CSV summary file")
    p.add_argument("--t0", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--hysteresis", type=float)
    p.add_argument("--max-events", dest="max_events", type=int)
    p.add_argument("--scan-cells", dest="scan_cells", type=int)

    p = add("plot", "render an SVG figure")
    p.add_argument("--input")
    p.add_argument("--out", help="SVG file (default stdout)")
    p.add_argument("--layers", help="comma separated subset of dt,vd,sdg,bisector,skeleton")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--k", type=int, help="polygon size for the bisector layer")
    p.add_argument("--size", type=int)

    p = add("gen", "generate an input document")
    p.add_argument("--kind", choices=list(GEN_KINDS))
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--degree", type=int, help="attach random trajectories of this degree")
    p.add_argument("--speed", type=float)
    p.add_argument("--out")
    return parser, subs


def parse_args(argv=None) -> tuple[str, object]:
    parser, subs = build_parser()
    ns = parser.parse_args(argv)
    cls = C.CONFIGS[ns.command]
    path = getattr(ns, "config", None)
    if path:
        try:
            with open(path, "rb") as f:
                data = json.loads(f.read().decode("utf-8"))
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config {path}: {exc}")
        if not isinstance(data, dict):
            parser.error("config must be a JSON object")
        unknown = sorted(set(data) - C._fields(cls))
        if unknown:
            parser.error(f"unknown config keys for {ns.command}: {', '.join(unknown)}")
        subs[ns.command].set_defaults(**data)
        ns = parser.parse_args(argv)
    return ns.command, C.from_namespace(cls, ns)


def main(argv=None) -> int:
    try:
        command, cfg = parse_args(argv)
        return COMMANDS[command](cfg)
    except SdgError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the final flush
        sys.stdout = open(os.devnull, "w")
        return 1
    except OSError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
