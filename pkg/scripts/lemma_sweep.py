"""Sweep the discrete-direction lemma checks over k and seeds.

One CSV row per (k, seed): violation counts per check, and the sizes of the
Euclidean SDGs at 16pi/k and 2pi/k next to the polygonal proxy.
"""

import argparse
import csv
import math
import sys

from sdgkit.euclid_delaunay import build_delaunay
from sdgkit.generators import generate
from sdgkit.stable_graph import lemma_suite, sdg_euclidean, sdg_proxy

CHECKS = ("long_euc_poly", "long_polyg_euc", "theorem_forward", "theorem_backward",
          "sandwich_missing", "sandwich_extra")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", default="24,32,64,128")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--kind", default="uniform")
    args = ap.parse_args(argv)

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["k", "seed", *CHECKS, "strong", "proxy", "weak"])
    for k in (int(x) for x in args.ks.split(",")):
        for seed in range(args.seeds):
            pts = generate(args.kind, args.n, seed)
            res = lemma_suite(pts, k)
            dt = build_delaunay(pts)
            sizes = [len(sdg_euclidean(pts, 16 * math.pi / k, dt=dt).edges),
                     len(sdg_proxy(pts, k, dt=dt).edges),
                     len(sdg_euclidean(pts, 2 * math.pi / k, dt=dt).edges)]
            w.writerow([k, seed, *(len(getattr(res, c)) for c in CHECKS), *sizes])


if __name__ == "__main__":
    main()
