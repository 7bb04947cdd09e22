"""End-to-end solvers and the brute-force reference.

DP     exact subset DP, every subset priced by an exact tour over its regions
FH     finite horizon: exact DP on windows of ``h`` clustered customers
GD     greedy nearest-feasible-region baseline
CENTROID  point CVRP on region centroids, then elastic refinement per tour
"""
from __future__ import annotations

import math
import time
from dataclasses import replace
from typing import Optional

from graphlib import CycleError, TopologicalSorter

from . import oracles
from .elastic import (
    MAX_SEQUENCE,
    VisitSequence,
    elastic_improv,
    optimal_tour_over_regions,
    tour_length,
)
from .errors import GuardError
from .geom import Polygon, closest_point_on_polygon, dist
from .model import Customer, Instance, Solution, Tour, make_solution
from .routing import (
    CAP_EPS,
    MAX_MASK_BITS,
    TIE_REL,
    PrecedenceDag,
    dp_partition,
    enumerate_feasible_subsets,
    held_karp,
    mask_of,
    members,
    precedence_admissible,
    tour_cost_table,
)

ORACLE_MAX = 8


class TourPricer:
    """Cached optimal single-tour cost for a set of customers (global mask)."""

    def __init__(self, inst: Instance, restarts: int = 4, seed: int = 0):
        self.inst = inst
        self.restarts = restarts
        self.seed = seed
        self.cache: dict[int, tuple[float, Tour]] = {}
        self.sweeps = 0

    def __call__(self, mask: int) -> tuple[float, Tour]:
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        inst = self.inst
        ids = members(mask)
        prec = inst.precedence.restricted(ids) if inst.precedence else []
        regions = [inst.customers[i].region for i in ids]
        if all(len(r.vertices) == 1 for r in regions):
            length, perm = held_karp(inst.depot, [r.vertices[0] for r in regions], prec)
            points = tuple(regions[j].vertices[0] for j in perm)
        else:
            perm, band = optimal_tour_over_regions(
                inst.depot, regions, restarts=self.restarts, seed=self.seed, precedence=prec)
            points, length = band.points, band.length
            self.sweeps += band.sweeps
        tour = Tour(tuple(ids[j] for j in perm), tuple(points), length)
        self.cache[mask] = (length, tour)
        return self.cache[mask]


def _check_region_guard(inst: Instance, feasible):
    if inst.point_regions:
        return
    widest = max((bin(m).count("1") for m in feasible), default=0)
    if widest > MAX_SEQUENCE:
        raise GuardError(f"a feasible tour holds {widest} region customers; "
                         f"the order enumeration is limited to {MAX_SEQUENCE}")


def _canonical(tours: list[Tour], inst: Instance) -> list[Tour]:
    # service order only matters under precedence
    if inst.precedence:
        return tours
    return sorted(tours, key=lambda t: min(t.customer_ids))


def _dp_on(inst: Instance, ids: list[int], pricer: TourPricer) -> list[Tour]:
    """Exact DP over the customers ``ids``; tours in service order."""
    weights = [inst.customers[i].weight for i in ids]
    feasible = enumerate_feasible_subsets(weights, inst.capacity)
    local = {}
    for m in feasible:
        g = 0
        for j in members(m):
            g |= 1 << ids[j]
        local[m] = g
    _check_region_guard(inst, feasible)
    table = tour_cost_table(len(ids), feasible, lambda m: pricer(local[m]))
    prec = PrecedenceDag(len(ids), inst.precedence.restricted(ids)) if inst.precedence else None
    _, masks = dp_partition(len(ids), feasible, table, prec)
    return [table.payload[m] for m in masks]


def solve_dp(inst: Instance, restarts: int = 4, seed: int = 0) -> Solution:
    if inst.n > MAX_MASK_BITS:
        raise GuardError(f"{inst.n} customers exceed the exact DP limit of {MAX_MASK_BITS}")
    t0 = time.perf_counter()
    pricer = TourPricer(inst, restarts, seed)
    tours = _dp_on(inst, list(range(inst.n)), pricer)
    runtime = time.perf_counter() - t0
    return make_solution(_canonical(tours, inst), "DP", runtime=runtime,
                         subsets_evaluated=len(pricer.cache), sweeps=pricer.sweeps)


# ---------------------------------------------------------------------------
# finite horizon


def _ancestors(inst: Instance) -> list[int]:
    """Transitive 'above' mask per customer."""
    n = inst.n
    if not inst.precedence:
        return [0] * n
    direct = inst.precedence.above
    order = list(TopologicalSorter({i: members(direct[i]) for i in range(n)}).static_order())
    anc = [0] * n
    for i in order:
        a = direct[i]
        for j in members(direct[i]):
            a |= anc[j]
        anc[i] = a
    return anc


def _select_window(inst: Instance, unserved: set[int], h: int, anc: list[int]) -> list[int]:
    """Seed nearest the depot plus its nearest unserved neighbours (by centroid).

    Under precedence the window is closed upwards: a customer joins only with
    all of its unserved ancestors.
    """
    cent = [r.centroid() for r in inst.regions]
    umask = mask_of(unserved)
    free = [c for c in unserved if not (anc[c] & umask)]
    seed = min(free, key=lambda c: (dist(cent[c], inst.depot), c))
    window = {seed}
    for c in sorted(unserved - {seed}, key=lambda c: (dist(cent[c], cent[seed]), c)):
        if len(window) >= h:
            break
        if c in window:
            continue
        need = {a for a in members(anc[c] & umask) if a not in window}
        if len(window) + len(need) + 1 <= h:
            window |= need
            window.add(c)
    return sorted(window)


def solve_fh(inst: Instance, h: int = 10, restarts: int = 4, seed: int = 0) -> Solution:
    if not (2 <= h <= MAX_MASK_BITS):
        raise GuardError(f"horizon h={h} outside [2, {MAX_MASK_BITS}]")
    t0 = time.perf_counter()
    pricer = TourPricer(inst, restarts, seed)
    anc = _ancestors(inst)
    unserved = set(range(inst.n))
    committed: list[Tour] = []
    windows = 0
    while unserved:
        windows += 1
        if len(unserved) <= h:
            committed.extend(_dp_on(inst, sorted(unserved), pricer))
            break
        window = _select_window(inst, unserved, h, anc)
        tours = _dp_on(inst, window, pricer)
        pool = {mask_of(t.customer_ids): t for t in tours}
        taken = 0
        for _ in range(2):
            umask = mask_of(unserved)
            ok = {m: t for m, t in pool.items()
                  if precedence_admissible(m, umask, inst.precedence)}
            if not ok:
                break
            # least length per customer; near-ties go to the lowest mask
            avg = {m: t.length / len(t.customer_ids) for m, t in ok.items()}
            cut = min(avg.values()) * (1.0 + TIE_REL)
            m = min(m for m, a in avg.items() if a <= cut)
            committed.append(pool.pop(m))
            unserved -= set(members(m))
            taken += 1
        assert taken, "window DP produced no admissible tour"
    runtime = time.perf_counter() - t0
    return make_solution(_canonical(committed, inst), "FH", runtime=runtime,
                         subsets_evaluated=len(pricer.cache), sweeps=pricer.sweeps,
                         windows=windows)


# ---------------------------------------------------------------------------
# baselines


def solve_greedy(inst: Instance, seed: int = 0) -> Solution:
    """Head for the nearest unserved region that still fits; go home when none fits."""
    t0 = time.perf_counter()
    anc = inst.precedence.above if inst.precedence else [0] * inst.n
    unserved = set(range(inst.n))
    tours: list[Tour] = []
    ids: list[int] = []
    pts = []
    pos, load = inst.depot, 0.0
    scale = max(inst.workspace)  # distance ties are judged relative to the workspace

    def close():
        tours.append(Tour(tuple(ids), tuple(pts), tour_length(inst.depot, pts)))

    while unserved:
        umask = mask_of(unserved)
        options = {}
        for c in unserved:
            if load + inst.customers[c].weight > inst.capacity + CAP_EPS or anc[c] & umask:
                continue
            q = closest_point_on_polygon(inst.customers[c].region, pos)
            options[c] = (dist(pos, q), q)
        if not options:
            close()
            ids, pts, pos, load = [], [], inst.depot, 0.0
            continue
        cut = min(d for d, _ in options.values()) + TIE_REL * scale
        c = min(c for c, (d, _) in options.items() if d <= cut)
        q = options[c][1]
        ids.append(c)
        pts.append(q)
        pos = q
        load += inst.customers[c].weight
        unserved.discard(c)
    if ids:
        close()
    runtime = time.perf_counter() - t0
    return make_solution(tours, "GD", runtime=runtime, subsets_evaluated=0, sweeps=0)


def anchor_points(inst: Instance):
    """Region centroids, projected into the region when they fall outside."""
    return [closest_point_on_polygon(r, r.centroid()) for r in inst.regions]


def solve_centroid(inst: Instance, inner: str = "DP", h: int = 10,
                   restarts: int = 4, seed: int = 0) -> Solution:
    """Solve point CVRP on the anchors, then refine each tour's points with elastic_improv."""
    t0 = time.perf_counter()
    anchors = anchor_points(inst)
    point_inst = replace(inst, customers=tuple(
        Customer(Polygon([a]), c.weight) for a, c in zip(anchors, inst.customers)))
    inner = inner.upper()
    if inner == "DP":
        stage1 = solve_dp(point_inst)
    elif inner == "FH":
        stage1 = solve_fh(point_inst, h)
    else:
        raise ValueError(f"inner solver must be DP or FH, not {inner!r}")
    tours = []
    sweeps = 0
    for t in stage1.tours:
        seq = VisitSequence(inst.depot, [inst.customers[c].region for c in t.customer_ids])
        band = elastic_improv(seq, init=[anchors[c] for c in t.customer_ids])
        sweeps += band.sweeps
        tours.append(Tour(t.customer_ids, band.points, band.length))
    runtime = time.perf_counter() - t0
    return make_solution(tours, "CENTROID", runtime=runtime,
                         subsets_evaluated=stage1.stats.get("subsets_evaluated", 0),
                         sweeps=sweeps, stage1_cost=stage1.total_cost, inner=inner)


# ---------------------------------------------------------------------------
# reference


def _blocks_orderable(blocks, prec: Optional[PrecedenceDag]):
    """A service order of ``blocks`` honouring precedence, or None."""
    if not prec:
        return list(range(len(blocks)))
    owner = {c: b for b, blk in enumerate(blocks) for c in blk}
    ts = TopologicalSorter({b: set() for b in range(len(blocks))})
    for a, c in prec.edges:
        if owner[a] != owner[c]:
            ts.add(owner[c], owner[a])
    try:
        return list(ts.static_order())
    except CycleError:
        return None


def oracle_cvrp(inst: Instance, samples: int = 2000) -> Solution:
    """Exhaustive optimum: every partition, every order within each tour.

    Point regions are exact; other regions are priced on ``samples`` boundary
    points each, which overestimates by at most sum(perimeter / samples).
    """
    n = inst.n
    if n > ORACLE_MAX:
        raise GuardError(f"oracle limited to {ORACLE_MAX} customers, got {n}")
    t0 = time.perf_counter()
    prec = inst.precedence
    tours: dict[tuple, Tour] = {}

    def block_cost(blk):
        local = prec.restricted(list(blk)) if prec else []
        regions = [inst.customers[i].region for i in blk]
        if all(len(r.vertices) == 1 for r in regions):
            pts = [r.vertices[0] for r in regions]
            length, perm = oracles.brute_force_tsp(inst.depot, pts, local)
            points = [pts[j] for j in perm]
        else:
            length, perm = oracles.sampled_region_tour(inst.depot, regions, samples, local)
            _, points = oracles.sampled_sequence_tour(inst.depot, [regions[j] for j in perm], samples)
        if not perm and blk:
            return math.inf
        tours[blk] = Tour(tuple(blk[j] for j in perm), tuple(points),
                          tour_length(inst.depot, points))
        return length

    best = (math.inf, None)
    cache: dict[tuple, float] = {}
    for part in oracles.set_partitions(range(n)):
        blocks = [tuple(sorted(b)) for b in part]
        if any(sum(inst.customers[i].weight for i in b) > inst.capacity + CAP_EPS for b in blocks):
            continue
        order = _blocks_orderable(blocks, prec)
        if order is None:
            continue
        total = 0.0
        for b in blocks:
            if b not in cache:
                cache[b] = block_cost(b)
            total += cache[b]
        if total < best[0]:
            best = (total, [blocks[i] for i in order])
    if best[1] is None:
        raise GuardError("no admissible partition")
    result = [tours[b] for b in best[1]]
    return make_solution(_canonical(result, inst), "ORACLE",
                         runtime=time.perf_counter() - t0, subsets_evaluated=len(cache), sweeps=0)
