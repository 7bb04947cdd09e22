"""Run a DP/FH/GD/CENTROID comparison grid and summarize mean costs.

    python3 scripts/compare_solvers.py --n 10-14 --seeds 0-9 --out results.csv

The raw table is the bench CSV; the summary printed here is the mean cost of
each solver per (n, placement, weight regime) cell, relative to the best solver
in that cell. Cells where a solver hit a size guard are skipped for it.
"""
import argparse
import csv
import sys
from collections import defaultdict
from pathlib import Path
from statistics import mean

from cvrg import cli


def summarize(rows):
    cells = defaultdict(lambda: defaultdict(list))
    for r in rows:
        if r["cost"]:
            cells[(int(r["n"]), r["placement"], r["weight_regime"])][r["solver"]].append(float(r["cost"]))
    lines = []
    for key in sorted(cells):
        means = {s: mean(v) for s, v in cells[key].items()}
        best = min(means.values())
        parts = "  ".join(f"{s}={m:.2f} (+{100 * (m / best - 1):.1f}%)" for s, m in sorted(means.items()))
        lines.append(f"n={key[0]:<3} {key[1]:<12} {key[2]:<6} {parts}")
    return lines


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="10-14")
    ap.add_argument("--seeds", default="0-9")
    ap.add_argument("--placement", default="uniform,gaussian,inv_gaussian")
    ap.add_argument("--weights", default="full,lower,band")
    ap.add_argument("--region", default="segment")
    ap.add_argument("--solvers", default="dp,fh,gd,centroid")
    ap.add_argument("--h", default="10")
    ap.add_argument("--jobs", default="4")
    ap.add_argument("--out", default="results.csv")
    args = ap.parse_args(argv)
    code = cli.main(["bench", "--n", args.n, "--seeds", args.seeds, "--placement", args.placement,
                     "--weights", args.weights, "--region", args.region, "--solvers", args.solvers,
                     "--h", args.h, "--jobs", args.jobs, "--out", args.out])
    if code:
        return code
    with open(args.out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    print(f"{len(rows)} rows written to {Path(args.out).resolve()}")
    print("\n".join(summarize(rows)))
    return 0


if __name__ == "__main__":
    sys.exit(main())
