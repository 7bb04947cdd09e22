"""Seeded instance generators.

``generate`` covers the benchmark grid (placement x weight regime x region
shape); ``gen_3partition_family`` and ``interlocking_counterexample`` build the two
structured families used to check known optimal structure.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from .elastic import VisitSequence
from .errors import GuardError
from .geom import Point, Polygon, convex_hull, region
from .model import Customer, Instance

MAX_ATTEMPTS = 10_000
MIN_WEIGHT = 1e-6
PARTITION_B = 1024  # weights s/B are exact binary fractions


class Placement(str, Enum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    INV_GAUSSIAN = "inv_gaussian"


class WeightRegime(str, Enum):
    FULL = "full"    # [0, 1]
    LOWER = "lower"  # [1/k, 1]
    BAND = "band"    # [1/k, 2/k]


class RegionKind(str, Enum):
    POINT = "point"
    SEGMENT = "segment"
    CONVEX_POLY = "convex"
    NONCONVEX_POLY = "nonconvex"


def _enum(cls, value):
    if isinstance(value, cls):
        return value
    try:
        return cls(str(value).lower())
    except ValueError:
        pass
    try:
        return cls[str(value).upper()]
    except KeyError:
        choices = ", ".join(e.value for e in cls)
        raise ValueError(f"{value!r} is not one of {choices}") from None


@dataclass(frozen=True)
class GenSpec:
    n: int
    placement: Placement = Placement.UNIFORM
    weight_regime: WeightRegime = WeightRegime.FULL
    k: int = 7
    region_kind: RegionKind = RegionKind.POINT
    workspace_side: float = 100.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "placement", _enum(Placement, self.placement))
        object.__setattr__(self, "weight_regime", _enum(WeightRegime, self.weight_regime))
        object.__setattr__(self, "region_kind", _enum(RegionKind, self.region_kind))
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if not (self.workspace_side > 0 and math.isfinite(self.workspace_side)):
            raise ValueError("workspace side must be positive")

    @property
    def weight_range(self) -> tuple[float, float]:
        k = self.k
        return {
            WeightRegime.FULL: (0.0, 1.0),
            WeightRegime.LOWER: (1.0 / k, 1.0),
            WeightRegime.BAND: (1.0 / k, 2.0 / k),
        }[self.weight_regime]

    def provenance(self) -> dict:
        d = asdict(self)
        for key in ("placement", "weight_regime", "region_kind"):
            d[key] = d[key].value
        return {k: str(v) for k, v in d.items()}


def _weights(spec: GenSpec, rng) -> np.ndarray:
    lo, hi = spec.weight_range
    w = rng.uniform(lo, hi, spec.n)
    if spec.weight_regime is WeightRegime.FULL:
        w = np.maximum(w, MIN_WEIGHT)
    return w


def _shape(kind: RegionKind, c: np.ndarray, diam: float, rng) -> list[tuple[float, float]]:
    r = diam / 2.0
    if kind is RegionKind.POINT:
        return [tuple(c)]
    theta = rng.uniform(0.0, 2.0 * math.pi)
    if kind is RegionKind.SEGMENT:
        d = r * np.array([math.cos(theta), math.sin(theta)])
        return [tuple(c - d), tuple(c + d)]
    if kind is RegionKind.CONVEX_POLY:
        while True:
            ang = rng.uniform(0.0, 2.0 * math.pi, 6)
            rad = r * np.sqrt(rng.uniform(0.0, 1.0, 6))
            pts = [tuple(c + [q * math.cos(a), q * math.sin(a)]) for a, q in zip(ang, rad)]
            hull = convex_hull(pts)
            if len(hull) >= 3:
                return [tuple(p) for p in hull]
    # star polygon: alternating outer / inner radii around the centre,
    # inner ones short enough to make every inner vertex reflex
    inner = rng.uniform(0.3, 0.6)
    out = []
    for j in range(8):
        a = theta + 2.0 * math.pi * j / 8
        q = r if j % 2 == 0 else r * inner
        out.append((float(c[0] + q * math.cos(a)), float(c[1] + q * math.sin(a))))
    return out


def _centre(spec: GenSpec, rng) -> np.ndarray:
    side = spec.workspace_side
    if spec.placement is Placement.UNIFORM:
        return rng.uniform(0.0, side, 2)
    return rng.normal(side / 2.0, side / 6.0, 2)


def generate(spec: GenSpec) -> Instance:
    """Deterministic instance for ``spec``: weights first, then regions.

    Regions that stick out of the workspace are redrawn (centre and shape).
    """
    rng = np.random.default_rng(spec.seed)
    side = spec.workspace_side
    weights = _weights(spec, rng)
    diam = side / 10.0
    shapes, centres = [], []
    for i in range(spec.n):
        for _ in range(MAX_ATTEMPTS):
            c = _centre(spec, rng)
            verts = _shape(spec.region_kind, c, diam, rng)
            if all(0.0 <= x <= side and 0.0 <= y <= side for x, y in verts):
                break
        else:
            raise GuardError(f"customer {i}: no region fits the workspace after {MAX_ATTEMPTS} draws")
        shapes.append(verts)
        centres.append(c)
    order = list(range(spec.n))
    if spec.placement is not Placement.UNIFORM:
        mid = np.array([side / 2.0, side / 2.0])
        near = sorted(order, key=lambda i: (float(np.hypot(*(centres[i] - mid))), i))
        heavy = sorted(order, key=lambda i: (-weights[i], i))
        if spec.placement is Placement.INV_GAUSSIAN:
            near.reverse()
        assigned = [0.0] * spec.n
        for loc, wi in zip(near, heavy):
            assigned[loc] = float(weights[wi])
        weights = np.array(assigned)
    customers = tuple(Customer(region(s), float(w)) for s, w in zip(shapes, weights))
    return Instance(
        depot=Point(side / 2.0, side / 2.0),
        customers=customers,
        workspace=(side, side),
        provenance=spec.provenance(),
    )


def _partition_triple(rng, B: int) -> list[int]:
    lo, hi = B // 4 + 1, (B + 1) // 2 - 1  # strictly inside (B/4, B/2)
    while True:
        a, b = (int(v) for v in rng.integers(lo, hi + 1, 2))
        c = B - a - b
        if lo <= c <= hi:
            return [a, b, c]


def gen_3partition_family(m: int, eps: float = 1e-3, seed: int = 0) -> Instance:
    """3m point customers near (1, 0) whose weights split into m triples of total 1.

    The depot sits at the origin, so the optimum is m tours of three customers
    costing between 2m and 2m + 6m*eps.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not (0 < eps < 1.0 / (4 * m)):
        raise ValueError("eps must lie in (0, 1/(4m))")
    rng = np.random.default_rng(seed)
    sizes = [s for _ in range(m) for s in _partition_triple(rng, PARTITION_B)]
    sizes = [sizes[i] for i in rng.permutation(len(sizes))]
    customers = []
    for s in sizes:
        a = rng.uniform(0.0, 2.0 * math.pi)
        r = eps * math.sqrt(rng.uniform(0.0, 1.0))
        p = (1.0 + r * math.cos(a), r * math.sin(a))
        customers.append(Customer(Polygon([p]), s / PARTITION_B))
    return Instance(
        depot=Point(0.0, 0.0),
        customers=tuple(customers),
        provenance={"family": "3partition", "m": str(m), "eps": repr(eps), "seed": str(seed),
                    "B": str(PARTITION_B), "sizes": " ".join(map(str, sizes))},
    )


INTERLOCK_INNER = [(-0.25, -0.5), (0.0, 0.0), (0.25, -0.5), (0.0, 0.5)]
INTERLOCK_OUTER = [(-1.0, 0.0), (-1.0, 0.9), (0.0, 1.2), (1.0, 0.9), (1.0, 0.0),
              (1.5, 1.5), (0.0, 2.0), (-1.5, 1.5)]


def interlocking_counterexample(depot_shift: float = 0.1) -> VisitSequence:
    """Two non-convex regions with two distinct elastic bands.

    A dart-shaped region sits above the depot inside the notch of a
    boomerang-shaped one; a band can wrap either arm of the boomerang. With
    ``depot_shift = 0`` the picture is mirror-symmetric and the two bands are
    equally long; a sideways shift of the depot separates their lengths.
    """
    return VisitSequence(Point(depot_shift, -1.0), (Polygon(INTERLOCK_INNER), Polygon(INTERLOCK_OUTER)))


def random_convex_sequence(seed: int, k: int, spread: float = 5.0) -> VisitSequence:
    """Depot at the origin and ``k`` random convex regions around it.

    Each region is the hull of 3 to 6 points in a disc of radius 0.3 to 1.2
    whose centre is uniform in [-spread, spread]^2; a hull that collapses to
    a segment is kept as a segment region.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng([seed, k])
    regions = []
    for _ in range(k):
        c = rng.uniform(-spread, spread, 2)
        r = rng.uniform(0.3, 1.2)
        m = int(rng.integers(3, 7))
        ang = rng.uniform(0.0, 2.0 * math.pi, m)
        rad = r * np.sqrt(rng.uniform(0.05, 1.0, m))
        pts = [(float(c[0] + q * math.cos(a)), float(c[1] + q * math.sin(a))) for a, q in zip(ang, rad)]
        regions.append(region(convex_hull(pts)))
    return VisitSequence(Point(0.0, 0.0), tuple(regions))
