"""Instances, tours and solutions, plus the solution validator."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import CVRGError
from .elastic import FEAS_TOL, tour_length
from .geom import Point, Polygon, as_point, region
from .routing import CAP_EPS, PrecedenceDag

SOLVERS = ("DP", "FH", "GD", "CENTROID", "ORACLE")


class InstanceError(CVRGError, ValueError):
    """An instance violates a domain bound."""


@dataclass(frozen=True)
class Customer:
    region: Polygon
    weight: float


@dataclass(frozen=True)
class Instance:
    """Depot, weighted customer regions, unit capacity.

    ``workspace`` is (width, height) of the axis-aligned rectangle centred on
    the depot; when omitted the smallest enclosing square is used.
    """

    depot: Point
    customers: tuple[Customer, ...]
    capacity: float = 1.0
    precedence: Optional[PrecedenceDag] = None
    workspace: Optional[tuple[float, float]] = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "depot", as_point(self.depot))
        custs = []
        for c in self.customers:
            if not isinstance(c, Customer):
                reg, w = c
                c = Customer(reg if isinstance(reg, Polygon) else region(reg), float(w))
            custs.append(c)
        object.__setattr__(self, "customers", tuple(custs))
        if self.capacity != 1.0:
            raise InstanceError("capacity is normalized to 1")
        for i, c in enumerate(custs):
            if not (0.0 < c.weight <= 1.0) or math.isnan(c.weight):
                raise InstanceError(f"customer {i}: weight {c.weight!r} outside (0, 1]")
        if self.precedence is not None and self.precedence.n != len(custs):
            raise InstanceError("precedence relation size does not match the customer count")
        dx, dy = self.depot
        if self.workspace is None:
            half = max((max(abs(v.x - dx), abs(v.y - dy)) for c in custs for v in c.region.vertices),
                       default=1.0)
            half = half if half > 0 else 1.0
            object.__setattr__(self, "workspace", (2.0 * half, 2.0 * half))
        else:
            w, h = (float(v) for v in self.workspace)
            if not (w > 0 and h > 0):
                raise InstanceError("workspace sides must be positive")
            object.__setattr__(self, "workspace", (w, h))
            slack = 1e-9 * max(1.0, w, h)
            for i, c in enumerate(custs):
                x0, y0, x1, y1 = c.region.bounds()
                if (x0 < dx - w / 2 - slack or x1 > dx + w / 2 + slack
                        or y0 < dy - h / 2 - slack or y1 > dy + h / 2 + slack):
                    raise InstanceError(f"customer {i}: region leaves the workspace")
        # free-form metadata: single-line strings so the text format round-trips
        object.__setattr__(self, "provenance",
                           {str(k): " ".join(str(v).split()) for k, v in self.provenance.items()})

    @property
    def n(self) -> int:
        return len(self.customers)

    @property
    def weights(self) -> list[float]:
        return [c.weight for c in self.customers]

    @property
    def regions(self) -> list[Polygon]:
        return [c.region for c in self.customers]

    @property
    def point_regions(self) -> bool:
        return all(len(c.region.vertices) == 1 for c in self.customers)

    def translated(self, dx: float, dy: float) -> "Instance":
        return replace(
            self,
            depot=Point(self.depot.x + dx, self.depot.y + dy),
            customers=tuple(Customer(c.region.translated(dx, dy), c.weight) for c in self.customers),
        )

    def scaled(self, alpha: float) -> "Instance":
        """Scale all coordinates about the origin."""
        return replace(
            self,
            depot=Point(alpha * self.depot.x, alpha * self.depot.y),
            customers=tuple(Customer(c.region.scaled(alpha), c.weight) for c in self.customers),
            workspace=(alpha * self.workspace[0], alpha * self.workspace[1]),
        )


@dataclass(frozen=True)
class Tour:
    customer_ids: tuple[int, ...]
    delivery_points: tuple[Point, ...]
    length: float


@dataclass(frozen=True)
class Solution:
    tours: tuple[Tour, ...]
    total_cost: float
    solver: str
    stats: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver tag {self.solver!r}")
        object.__setattr__(self, "tours", tuple(self.tours))

    def index_sequences(self) -> list[tuple[int, ...]]:
        return [t.customer_ids for t in self.tours]


def make_solution(tours, solver: str, **stats) -> Solution:
    tours = tuple(tours)
    return Solution(tours, math.fsum(t.length for t in tours), solver, stats)


def validate_solution(inst: Instance, sol: Solution, tol: float = 1e-6) -> list[str]:
    """Every invariant the solution breaks, one message each (empty when valid)."""
    problems: list[str] = []
    seen: dict[int, list[int]] = {}
    where: dict[int, tuple[int, int]] = {}
    total = 0.0
    for t, tour in enumerate(sol.tours):
        ids = tour.customer_ids
        if len(ids) != len(tour.delivery_points):
            problems.append(f"tour {t}: {len(ids)} customers but {len(tour.delivery_points)} points")
            continue
        if not ids:
            problems.append(f"tour {t}: empty tour")
        load = 0.0
        ok_ids = True
        for pos, (c, p) in enumerate(zip(ids, tour.delivery_points)):
            if not (0 <= c < inst.n):
                problems.append(f"tour {t}: unknown customer {c}")
                ok_ids = False
                continue
            seen.setdefault(c, []).append(t)
            where.setdefault(c, (t, pos))
            load += inst.customers[c].weight
            if not inst.customers[c].region.contains(p, FEAS_TOL):
                problems.append(f"tour {t}: delivery point {pos} for customer {c} lies outside its region")
        if load > inst.capacity + CAP_EPS:
            problems.append(f"tour {t}: load {load:.12g} exceeds capacity {inst.capacity:g}")
        actual = tour_length(inst.depot, tour.delivery_points)
        if ok_ids and abs(actual - tour.length) > tol:
            problems.append(f"tour {t}: stated length {tour.length!r} but recomputed {actual!r}")
        total += actual
    for c in range(inst.n):
        ts = seen.get(c, [])
        if not ts:
            problems.append(f"customer {c}: not served")
        elif len(ts) > 1:
            problems.append(f"customer {c}: served by several tours {ts}")
    if abs(total - sol.total_cost) > tol:
        problems.append(f"total_cost {sol.total_cost!r} but tours sum to {total!r}")
    if inst.precedence:
        for a, b in inst.precedence.edges:
            if a in where and b in where and where[a] > where[b]:
                problems.append(f"precedence: customer {a} must be picked before customer {b} "
                                f"(tour {where[b][0]})")
    return problems
