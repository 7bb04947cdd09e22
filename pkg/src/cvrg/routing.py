"""Point-based combinatorial core.

Customer sets are plain ``int`` bitmasks over customers ``0..n-1``.

Two phases: ``tour_cost_table`` prices every capacity-feasible subset once,
then ``dp_partition`` runs ``J(I) = min_s J(I - s) + c(s)`` over remaining sets
``I``, where ``s`` ranges over feasible subsets of ``I``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import GuardError, InfeasibleError, PrecedenceError
from .geom import dist

MAX_MASK_BITS = 24
MAX_HELD_KARP = 20
CAP_EPS = 1e-12
# costs within this relative gap count as equal, so that choices do not flip
# under rounding noise (translation, scaling)
TIE_REL = 1e-11


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class PrecedenceDag:
    """``(above, below)`` pairs: ``above`` must be picked up no later than ``below``."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    above: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple(sorted(set((int(a), int(b)) for a, b in self.edges)))
        object.__setattr__(self, "edges", edges)
        ts = TopologicalSorter({i: set() for i in range(self.n)})
        above = [0] * self.n
        for a, b in edges:
            if not (0 <= a < self.n and 0 <= b < self.n) or a == b:
                raise PrecedenceError(f"bad precedence edge ({a}, {b}) for n={self.n}")
            ts.add(b, a)
            above[b] |= 1 << a
        try:
            ts.prepare()
        except CycleError as exc:
            raise PrecedenceError(f"precedence relation is cyclic: {exc.args[1]}") from None
        object.__setattr__(self, "above", tuple(above))

    def __bool__(self):
        return bool(self.edges)

    def restricted(self, ids: Sequence[int]) -> list[tuple[int, int]]:
        """Edges among ``ids``, re-indexed to positions in ``ids``."""
        pos = {c: i for i, c in enumerate(ids)}
        return [(pos[a], pos[b]) for a, b in self.edges if a in pos and b in pos]


def precedence_admissible(s: int, remaining: int, prec: Optional[PrecedenceDag]) -> bool:
    """True iff no customer of ``remaining - s`` lies above a member of ``s``."""
    if not prec:
        return True
    rest = remaining & ~s
    if not rest:
        return True
    above = prec.above
    m, i = s, 0
    while m:
        if m & 1 and above[i] & rest:
            return False
        m >>= 1
        i += 1
    return True


# ---------------------------------------------------------------------------
# phase 1


def held_karp(depot, pts: Sequence, precedence: Iterable = ()) -> tuple[float, tuple[int, ...]]:
    """Exact shortest closed tour depot -> pts -> depot.

    ``precedence`` holds (before, after) index pairs into ``pts``. Without
    precedence the returned order is oriented so that ``perm[0] < perm[-1]``.
    """
    n = len(pts)
    if n > MAX_HELD_KARP:
        raise GuardError(f"held_karp on {n} points exceeds the limit of {MAX_HELD_KARP}")
    if n == 0:
        return 0.0, ()
    pairs = list(precedence)
    need = [0] * n
    for a, b in pairs:
        need[b] |= 1 << a
    d0 = [dist(depot, p) for p in pts]
    dm = [[dist(p, q) for q in pts] for p in pts]
    full = (1 << n) - 1
    inf = math.inf
    cost = [[inf] * n for _ in range(1 << n)]
    parent = [[-1] * n for _ in range(1 << n)]
    for j in range(n):
        if not need[j]:
            cost[1 << j][j] = d0[j]
    for mask in range(1, full + 1):
        row = cost[mask]
        for j in range(n):
            cj = row[j]
            if cj == inf:
                continue
            for k in range(n):
                bit = 1 << k
                if mask & bit or need[k] & ~mask:
                    continue
                nm = mask | bit
                c = cj + dm[j][k]
                if c < cost[nm][k]:
                    cost[nm][k] = c
                    parent[nm][k] = j
    last = min(range(n), key=lambda j: (cost[full][j] + d0[j], j))
    if cost[full][last] == inf:
        raise InfeasibleError("precedence pairs admit no visiting order")
    order = []
    mask, j = full, last
    while j != -1:
        order.append(j)
        pj = parent[mask][j]
        mask ^= 1 << j
        j = pj
    order.reverse()
    if not pairs and order[0] > order[-1]:
        order.reverse()
    seq = [depot] + [pts[i] for i in order] + [depot]
    length = sum(dist(seq[i], seq[i + 1]) for i in range(len(seq) - 1))
    return length, tuple(order)


def enumerate_feasible_subsets(weights: Sequence[float], capacity: float = 1.0) -> list[int]:
    """All nonempty masks whose weight sum is at most ``capacity`` (ascending)."""
    n = len(weights)
    if n > MAX_MASK_BITS:
        raise GuardError(f"{n} customers exceed the bitmask limit of {MAX_MASK_BITS}")
    for w in weights:
        if not (0.0 < w <= 1.0):
            raise ValueError(f"weight {w} outside (0, 1]")
    limit = capacity + CAP_EPS
    out: list[int] = []
    order = sorted(range(n), key=lambda i: weights[i])

    def extend(start, mask, total):
        for pos in range(start, n):
            i = order[pos]
            t = total + weights[i]
            if t > limit:
                break  # remaining weights are no lighter
            m = mask | (1 << i)
            out.append(m)
            extend(pos + 1, m, t)

    extend(0, 0, 0.0)
    out.sort()
    return out


class SubsetTable:
    """Tour cost per customer mask; ``inf`` for subsets that are not a tour."""

    def __init__(self, n: int):
        if n > MAX_MASK_BITS:
            raise GuardError(f"{n} customers exceed the bitmask limit of {MAX_MASK_BITS}")
        self.n = int(n)
        self.cost = np.full(1 << n, np.inf)
        self.payload: dict[int, object] = {}

    def __setitem__(self, mask: int, value):
        c, payload = value
        self.cost[mask] = c
        self.payload[mask] = payload

    def __getitem__(self, mask: int) -> float:
        return float(self.cost[mask])

    def __contains__(self, mask: int) -> bool:
        return mask in self.payload

    def __len__(self):
        return len(self.payload)

    def masks(self) -> list[int]:
        return sorted(self.payload)

    def items(self):
        for m in self.masks():
            yield m, (float(self.cost[m]), self.payload[m])


def tour_cost_table(n: int, feasible: Iterable[int],
                    cost_fn: Callable[[int], tuple[float, object]]) -> SubsetTable:
    """Price every feasible subset once with ``cost_fn(mask) -> (cost, payload)``."""
    table = SubsetTable(n)
    for m in feasible:
        table[m] = cost_fn(m)
    return table


# ---------------------------------------------------------------------------
# phase 2


def dp_partition(
    n: int,
    feasible: Sequence[int],
    c: Mapping[int, float] | SubsetTable,
    prec: Optional[PrecedenceDag] = None,
) -> tuple[float, list[int]]:
    """Cheapest split of all ``n`` customers into feasible tours.

    Tours are returned in service order. With ``prec`` a tour may only be
    served once nothing still waiting sits above one of its customers.
    Among choices within ``TIE_REL`` of the best the lowest mask wins.
    """
    n = int(n)
    if n > MAX_MASK_BITS:
        raise GuardError(f"{n} customers exceed the bitmask limit of {MAX_MASK_BITS}")
    full = (1 << n) - 1
    if n == 0:
        return 0.0, []
    covered = 0
    for m in feasible:
        covered |= m
    if covered != full:
        missing = members(full & ~covered)
        raise InfeasibleError(f"customers {missing} belong to no feasible tour")
    feasible = sorted(int(m) for m in feasible)
    cost_of = {m: float(c[m]) for m in feasible}
    # without precedence the tour holding the lowest remaining customer can be
    # served first, so only subsets containing it are tried
    contains: list[list[int]] = [[m for m in feasible if m >> i & 1] for i in range(n)]
    use_prec = bool(prec)

    J: dict[int, float] = {0: 0.0}
    choice: dict[int, int] = {0: 0}

    def candidates(I):
        low = (I & -I).bit_length() - 1
        if use_prec:
            pool = feasible if len(feasible) <= (1 << bin(I).count("1")) else _submasks(I)
        else:
            pool = contains[low]
        for s in pool:
            if s & ~I or s not in cost_of:
                continue
            if use_prec and not precedence_admissible(s, I, prec):
                continue
            yield s

    # iterative post-order evaluation (recursion depth stays bounded)
    stack = [full]
    while stack:
        I = stack[-1]
        if I in J:
            stack.pop()
            continue
        pending = [I ^ s for s in candidates(I) if (I ^ s) not in J]
        if pending:
            stack.extend(pending)
            continue
        vals = [(s, J[I ^ s] + cost_of[s]) for s in candidates(I)]
        best = min((v for _, v in vals), default=math.inf)
        best_s = 0
        if best < math.inf:
            cut = best + TIE_REL * abs(best)
            best_s, best = min((s, v) for s, v in vals if v <= cut)
        J[I] = best
        choice[I] = best_s
        stack.pop()

    if J[full] == math.inf:
        raise InfeasibleError("no admissible sequence of tours serves every customer")
    tours = []
    I = full
    while I:
        s = choice[I]
        tours.append(s)
        I ^= s
    return J[full], tours


def _submasks(I: int):
    s = I
    out = []
    while s:
        out.append(s)
        s = (s - 1) & I
    out.reverse()
    return out


def count_transitions(n: int, feasible: Sequence[int], prec: Optional[PrecedenceDag] = None) -> int:
    """Number of (remaining set, admissible next tour) pairs over all remaining sets."""
    total = 0
    for I in range(1, 1 << n):
        for s in feasible:
            if s & ~I == 0 and precedence_admissible(s, I, prec):
                total += 1
    return total
