"""Command line: ``cvrg gen|solve|bench|validate|oracle``.

Exit codes
  0  success
  2  bad usage (argparse, invalid flag combination)
  3  a document failed to parse
  4  a size guard of the requested method was exceeded
  5  a solution failed validation
  6  the instance cannot be served
  7  file could not be read or written
"""
from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

from . import formats
from .errors import GuardError, InfeasibleError, ParseError
from .instances import GenSpec, Placement, RegionKind, WeightRegime, gen_3partition_family, generate
from .model import validate_solution
from .solvers import oracle_cvrp, solve_centroid, solve_dp, solve_fh, solve_greedy

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_GUARD = 4
EXIT_INVALID = 5
EXIT_INFEASIBLE = 6
EXIT_IO = 7

CSV_HEADER = ["instance_id", "n", "placement", "weight_regime", "solver", "h",
              "cost", "runtime_seconds", "tours", "seed"]
ALGOS = ("dp", "fh", "gd", "centroid")


class UsageError(Exception):
    pass


def run_solver(inst, algo: str, h: int = 10, restarts: int = 4, seed: int = 0, inner: str = "dp"):
    algo = algo.lower()
    if algo == "dp":
        return solve_dp(inst, restarts=restarts, seed=seed)
    if algo == "fh":
        return solve_fh(inst, h=h, restarts=restarts, seed=seed)
    if algo == "gd":
        return solve_greedy(inst, seed=seed)
    if algo == "centroid":
        return solve_centroid(inst, inner=inner, h=h, restarts=restarts, seed=seed)
    raise UsageError(f"unknown algorithm {algo!r}")


def _write_text(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _summary(sol) -> str:
    return (f"{sol.solver} cost={formats.fmt(sol.total_cost)} tours={len(sol.tours)} "
            f"runtime={sol.stats.get('runtime', 0.0):.3f}s")


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    if args.family == "3partition":
        if args.m is None:
            raise UsageError("--family 3partition needs --m")
        try:
            inst = gen_3partition_family(args.m, args.eps, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.n is None:
            raise UsageError("--n is required")
        try:
            spec = GenSpec(args.n, args.placement, args.weights, args.k, args.region, args.side, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        inst = generate(spec)
    _write_text(args.out, formats.emit_instance(inst))
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = formats.read_instance(args.input)
    sol = run_solver(inst, args.algo, args.h, args.restarts, args.seed, args.inner)
    problems = validate_solution(inst, sol)
    if problems:
        for p in problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        _write_text(args.out, formats.emit_solution(sol))
    print(_summary(sol))
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = formats.read_instance(args.input)
    sol = oracle_cvrp(inst, samples=args.samples)
    if args.out:
        _write_text(args.out, formats.emit_solution(sol))
    print(_summary(sol))
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = formats.read_instance(args.instance)
    sol = formats.read_solution(args.solution)
    problems = validate_solution(inst, sol, tol=args.tol)
    if problems:
        for p in problems:
            print(f"FAIL {p}")
        return EXIT_INVALID
    print(f"PASS {len(sol.tours)} tours, {inst.n} customers, cost {formats.fmt(sol.total_cost)}")
    return EXIT_OK


@dataclass(frozen=True)
class BenchCell:
    spec: GenSpec
    solver: str
    h: int
    restarts: int
    timing: bool

    @property
    def instance_id(self) -> str:
        s = self.spec
        return (f"n{s.n}-{s.placement.value}-{s.weight_regime.value}-k{s.k}-"
                f"{s.region_kind.value}-s{s.seed}")


def run_cell(cell: BenchCell) -> list[str]:
    """One CSV row; a failing solver leaves cost, runtime and tours empty."""
    spec = cell.spec
    inst = generate(spec)
    h = str(cell.h) if cell.solver in ("fh", "centroid") else ""
    row = [cell.instance_id, str(spec.n), spec.placement.value, spec.weight_regime.value,
           cell.solver.upper(), h]
    try:
        t0 = time.perf_counter()
        inner = "fh" if cell.solver == "centroid" and spec.n > cell.h else "dp"
        sol = run_solver(inst, cell.solver, cell.h, cell.restarts, spec.seed, inner)
        runtime = time.perf_counter() - t0
    except (GuardError, InfeasibleError) as exc:
        print(f"{cell.instance_id} {cell.solver}: {exc}", file=sys.stderr)
        return row + ["", "", "", str(spec.seed)]
    rt = f"{runtime:.6f}" if cell.timing else "0"
    return row + [formats.fmt(sol.total_cost), rt, str(len(sol.tours)), str(spec.seed)]


def _int_list(text: str) -> list[int]:
    """'10-14' or '3,5,8' or a mix."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _name_list(text: str) -> list[str]:
    return [p.strip().lower() for p in text.split(",") if p.strip()]


def bench_cells(args) -> list[BenchCell]:
    try:
        ns = _int_list(args.n)
        seeds = _int_list(args.seeds)
    except ValueError as exc:
        raise UsageError(f"bad integer list: {exc}") from None
    solvers = _name_list(args.solvers)
    if not solvers:
        raise UsageError("the solver list is empty")
    for s in solvers:
        if s not in ALGOS:
            raise UsageError(f"unknown solver {s!r}; choose from {', '.join(ALGOS)}")
    if not ns or not seeds:
        raise UsageError("need at least one n and one seed")
    cells = []
    try:
        for placement in _name_list(args.placement):
            for regime in _name_list(args.weights):
                for kind in _name_list(args.region):
                    for n in ns:
                        for seed in seeds:
                            spec = GenSpec(n, placement, regime, args.k, kind, args.side, seed)
                            cells.extend(BenchCell(spec, s, args.h, args.restarts, not args.no_timing)
                                         for s in solvers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return cells


def bench_csv(cells: list[BenchCell], jobs: int = 1) -> str:
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_cell, cells))  # map keeps submission order
    else:
        rows = [run_cell(c) for c in cells]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args) -> int:
    cells = bench_cells(args)
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    _write_text(args.out, bench_csv(cells, args.jobs))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _default_jobs() -> int:
    raw = os.environ.get("CVRG_JOBS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvrg", description="Capacitated routing to polygonal customer regions.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", choices=["grid", "3partition"], default="grid",
                   help="'grid' is the benchmark generator, '3partition' the hardness family")
    g.add_argument("--n", type=int)
    g.add_argument("--placement", choices=[e.value for e in Placement], default="uniform")
    g.add_argument("--weights", choices=[e.value for e in WeightRegime], default="full")
    g.add_argument("--k", type=int, default=7)
    g.add_argument("--region", choices=[e.value for e in RegionKind], default="point")
    g.add_argument("--side", type=float, default=100.0)
    g.add_argument("--m", type=int)
    g.add_argument("--eps", type=float, default=1e-3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", help="output path (stdout when omitted)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("input")
    s.add_argument("--algo", choices=ALGOS, default="dp")
    s.add_argument("--h", type=int, default=10)
    s.add_argument("--inner", choices=["dp", "fh"], default="dp", help="first stage of --algo centroid")
    s.add_argument("--restarts", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive reference solution (n <= 8)")
    o.add_argument("input")
    o.add_argument("--samples", type=int, default=2000)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("validate", help="check a solution against its instance")
    v.add_argument("instance")
    v.add_argument("solution")
    v.add_argument("--tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_validate)

    b = sub.add_parser("bench", help="run a solver grid and write a CSV table")
    b.add_argument("--n", default="10-14", help="sizes, e.g. '10-14' or '10,20'")
    b.add_argument("--seeds", default="0-4")
    b.add_argument("--placement", default="uniform", help="comma list")
    b.add_argument("--weights", default="full", help="comma list")
    b.add_argument("--region", default="point", help="comma list")
    b.add_argument("--k", type=int, default=7)
    b.add_argument("--side", type=float, default=100.0)
    b.add_argument("--solvers", default="dp,fh,gd")
    b.add_argument("--h", type=int, default=10)
    b.add_argument("--restarts", type=int, default=4)
    b.add_argument("--jobs", type=int, default=_default_jobs(), help="worker processes (env CVRG_JOBS)")
    b.add_argument("--no-timing", action="store_true",
                   help="write 0 for runtime so reruns are byte-identical")
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cvrg {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"cvrg {args.command}: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardError as exc:
        print(f"cvrg {args.command}: guard violated: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InfeasibleError as exc:
        print(f"cvrg {args.command}: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"cvrg {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
