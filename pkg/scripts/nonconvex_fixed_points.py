"""Show that Elastic-Improv has several fixed points on non-convex regions.

    python3 scripts/nonconvex_fixed_points.py --inits 20

Runs the elastic band from random starting points on the two interlocking
non-convex regions and lists each distinct converged tour with its length and
band-condition verdict. On convex sequences every start reaches the same tour.
"""
import argparse
import sys

import numpy as np

from cvrg.elastic import check_band_conditions, elastic_improv, random_init
from cvrg.instances import interlocking_counterexample, random_convex_sequence


def fixed_points(seq, inits):
    found = {}
    for seed in range(inits):
        band = elastic_improv(seq, init=random_init(seq, np.random.default_rng(seed)))
        found.setdefault(round(band.length, 6), (seed, band))
    return found


def report(title, seq, inits):
    found = fixed_points(seq, inits)
    print(f"{title}: {len(found)} distinct fixed point(s) from {inits} starts")
    for length, (seed, band) in sorted(found.items()):
        verdict = check_band_conditions(band, seq)
        pts = " ".join(f"({p.x:.4f}, {p.y:.4f})" for p in band.points)
        print(f"  length {length:.6f}  first seed {seed}  band ok={verdict.ok}  points {pts}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--inits", type=int, default=20)
    ap.add_argument("--depot-shift", type=float, default=0.1)
    args = ap.parse_args(argv)
    report("non-convex pair", interlocking_counterexample(args.depot_shift), args.inits)
    report("convex control", random_convex_sequence(0, 3), args.inits)
    return 0


if __name__ == "__main__":
    sys.exit(main())
