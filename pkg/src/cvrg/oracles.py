"""Brute-force reference computations.

Nothing here shares code with the solvers it is used to check: tours are
costed by plain permutation search, fixed-sequence region tours by a
discretized layered DP, and partitions by explicit enumeration.
"""
from __future__ import annotations

import itertools
import math
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np


def _d(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def brute_force_tsp(depot, pts: Sequence, precedence: Iterable = ()) -> tuple[float, tuple]:
    """Shortest closed tour depot -> pts -> depot by trying every order."""
    pairs = list(precedence)
    best = (math.inf, ())
    for perm in itertools.permutations(range(len(pts))):
        if pairs:
            pos = {c: i for i, c in enumerate(perm)}
            if any(pos[a] > pos[b] for a, b in pairs):
                continue
        seq = [depot] + [pts[i] for i in perm] + [depot]
        length = sum(_d(seq[i], seq[i + 1]) for i in range(len(seq) - 1))
        if length < best[0]:
            best = (length, perm)
    return best


def sampled_sequence_tour(depot, regions: Sequence, m: int = 2000) -> tuple[float, list]:
    """Shortest depot -> regions (in order) -> depot tour over boundary samples.

    Each region contributes ``m`` boundary points (a point region contributes
    itself). The result upper-bounds the continuous optimum by at most
    sum(perimeter / m).
    """
    layers = [np.array(r.boundary_samples(m) if r.perimeter > 0 else list(r.vertices), dtype=float)
              for r in regions]
    d = np.asarray(depot, dtype=float)
    cost = np.hypot(*(layers[0] - d).T)
    back = []
    for prev, cur in zip(layers, layers[1:]):
        dm = np.hypot(prev[:, None, 0] - cur[None, :, 0], prev[:, None, 1] - cur[None, :, 1])
        tot = cost[:, None] + dm
        arg = np.argmin(tot, axis=0)
        back.append(arg)
        cost = tot[arg, np.arange(len(cur))]
    cost = cost + np.hypot(*(layers[-1] - d).T)
    j = int(np.argmin(cost))
    best = float(cost[j])
    idx = [j]
    for arg in reversed(back):
        j = int(arg[j])
        idx.append(j)
    idx.reverse()
    return best, [tuple(layers[i][j]) for i, j in enumerate(idx)]


def sampled_region_tour(depot, regions: Sequence, m: int = 2000,
                        precedence: Iterable = ()) -> tuple[float, tuple]:
    """Best sampled tour over every visit order of ``regions``."""
    pairs = list(precedence)
    best = (math.inf, ())
    for perm in itertools.permutations(range(len(regions))):
        if pairs:
            pos = {c: i for i, c in enumerate(perm)}
            if any(pos[a] > pos[b] for a, b in pairs):
                continue
        length, _ = sampled_sequence_tour(depot, [regions[i] for i in perm], m)
        if length < best[0]:
            best = (length, perm)
    return best


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """Every partition of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def best_partition(
    n: int,
    weights: Sequence[float],
    block_cost: Callable[[tuple], float],
    capacity: float = 1.0,
) -> tuple[float, list[tuple]]:
    """Cheapest partition of customers 0..n-1 into capacity-feasible blocks."""
    cache: dict = {}
    best = (math.inf, [])
    for part in set_partitions(range(n)):
        if any(sum(weights[i] for i in blk) > capacity + 1e-12 for blk in part):
            continue
        total = 0.0
        for blk in part:
            key = tuple(sorted(blk))
            if key not in cache:
                cache[key] = block_cost(key)
            total += cache[key]
        if total < best[0]:
            best = (total, [tuple(sorted(b)) for b in part])
    return best
