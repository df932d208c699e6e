"""Render a stable Delaunay graph figure: stable edges solid, the remaining
Delaunay edges dashed, and optionally the diamond bisectors of stable edges."""

import argparse
import math

from sdgkit.documents import write_atomic
from sdgkit.generators import generate
from sdgkit.render import RenderSpec, compute_structures, render_svg


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", default="uniform")
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--alpha", type=float, default=math.pi / 8)
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--bisectors", action="store_true")
    ap.add_argument("--out", default="sdg_figure.svg")
    args = ap.parse_args(argv)

    pts = generate(args.kind, args.n, args.seed)
    layers = ("dt", "sdg", "bisector") if args.bisectors else ("dt", "sdg")
    spec = RenderSpec(layers=layers)
    s = compute_structures(pts, spec.layers, alpha=args.alpha, k=args.k)
    write_atomic(args.out, render_svg(pts, s, spec))
    print(f"{args.out}: {len(s.dt.edges)} Delaunay edges, {len(s.sdg)} stable")


if __name__ == "__main__":
    main()
