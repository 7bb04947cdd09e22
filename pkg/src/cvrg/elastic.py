"""Fixed-sequence tour optimization over regions.

A tour leaves the depot, touches ``regions[0], ..., regions[k-1]`` in order and
returns. ``elastic_improv`` repeatedly moves each touch point to the best spot of
its region given the current neighbours (a Gauss-Seidel sweep), which converges
to the unique optimum when every region is convex.

Indices are 0-based throughout.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import GeometryError, GuardError
from .geom import (
    EPS,
    Point,
    Polygon,
    as_point,
    closest_point_on_polygon,
    dist,
    intersect_convex,
    min_sum_point_on_region,
)
from .routing import TIE_REL

MAX_SEQUENCE = 9
FEAS_TOL = 1e-7
COINCIDE = 1e-9
# absolute per-sweep length decrease; point error scales like its square root,
# so 1e-10 would leave touch points about 1e-5 from the optimum
SWEEP_TOL = 1e-13


@dataclass(frozen=True)
class VisitSequence:
    depot: Point
    regions: tuple[Polygon, ...]

    def __post_init__(self):
        object.__setattr__(self, "depot", as_point(self.depot))
        object.__setattr__(self, "regions", tuple(self.regions))
        if len(self.regions) < 1:
            raise GeometryError("a visit sequence needs at least one region")

    @property
    def k(self) -> int:
        return len(self.regions)

    @property
    def all_convex(self) -> bool:
        return all(r.is_convex for r in self.regions)


@dataclass(frozen=True)
class BandTour:
    points: tuple[Point, ...]
    length: float
    converged: bool = True
    sweeps: int = 0
    history: tuple[float, ...] = field(default=(), repr=False, compare=False)


def tour_length(depot, points: Sequence) -> float:
    if not points:
        return 0.0
    total = dist(depot, points[0]) + dist(points[-1], depot)
    for i in range(len(points) - 1):
        total += dist(points[i], points[i + 1])
    return total


def _neighbours(i, points, depot):
    prev = points[i - 1] if i > 0 else depot
    nxt = points[i + 1] if i + 1 < len(points) else depot
    return prev, nxt


def local_improv(i: int, current, seq: VisitSequence) -> Point:
    """Best point of ``seq.regions[i]`` given the current neighbours of point i.

    ``current`` is a BandTour or a plain sequence of points.
    """
    points = current.points if isinstance(current, BandTour) else current
    prev, nxt = _neighbours(i, points, seq.depot)
    p, _ = min_sum_point_on_region(seq.regions[i], prev, nxt)
    return p


def default_init(seq: VisitSequence) -> list[Point]:
    return [closest_point_on_polygon(r, r.centroid()) for r in seq.regions]


def random_init(seq: VisitSequence, rng: np.random.Generator) -> list[Point]:
    return [r.point_at(rng.uniform(0.0, r.perimeter)) if r.perimeter > 0 else r.vertices[0]
            for r in seq.regions]


def elastic_improv(
    seq: VisitSequence,
    init: Optional[Iterable] = None,
    max_sweeps: int = 10_000,
    tol: float = SWEEP_TOL,
) -> BandTour:
    if max_sweeps < 1 or tol <= 0:
        raise ValueError("need max_sweeps >= 1 and tol > 0")
    depot, regions = seq.depot, seq.regions
    if init is None:
        pts = default_init(seq)
    else:
        pts = [as_point(p) for p in init]
        if len(pts) != seq.k:
            raise ValueError(f"init has {len(pts)} points for {seq.k} regions")
        for i, (p, r) in enumerate(zip(pts, regions)):
            if not r.contains(p, FEAS_TOL):
                raise GeometryError(f"init point {i} lies outside its region")
    length = tour_length(depot, pts)
    history = [length]
    k = len(pts)
    converged = False
    sweeps = 0
    while sweeps < max_sweeps:
        for i in range(k):
            prev = pts[i - 1] if i > 0 else depot
            nxt = pts[i + 1] if i + 1 < k else depot
            cand, c_new = min_sum_point_on_region(regions[i], prev, nxt)
            old = pts[i]
            if c_new <= dist(old, prev) + dist(old, nxt):
                pts[i] = cand
        _joint_moves(pts, depot, regions)
        sweeps += 1
        new_length = tour_length(depot, pts)
        decrease = length - new_length
        length = new_length
        history.append(length)
        if decrease < tol:
            converged = True
            break
    return BandTour(tuple(pts), length, converged, sweeps, tuple(history))


def coincident_runs(points) -> list[tuple[int, int]]:
    """Maximal runs [i, j] (inclusive, j > i) of consecutive coinciding points."""
    runs = []
    i = 0
    while i < len(points):
        j = i
        while j + 1 < len(points) and dist(points[j], points[j + 1]) <= COINCIDE:
            j += 1
        if j > i:
            runs.append((i, j))
        i = j + 1
    return runs


def _run_region(regions, i, j):
    if not all(regions[t].is_convex for t in range(i, j + 1)):
        return None
    inter = regions[i]
    for t in range(i + 1, j + 1):
        inter = intersect_convex(inter, regions[t])
        if inter is None:
            return None
    return inter


def _joint_moves(pts, depot, regions):
    # Single-point moves stall where consecutive points coincide (the objective
    # is not differentiable there); move each such run as one point instead.
    for i, j in coincident_runs(pts):
        inter = _run_region(regions, i, j)
        if inter is None:
            continue
        prev = pts[i - 1] if i > 0 else depot
        nxt = pts[j + 1] if j + 1 < len(pts) else depot
        q, c = min_sum_point_on_region(inter, prev, nxt)
        if c < dist(pts[i], prev) + dist(pts[j], nxt) - 1e-15:
            for t in range(i, j + 1):
                pts[t] = q


# ---------------------------------------------------------------------------
# elastic-band conditions


@dataclass
class BandReport:
    ok: bool
    kinds: list[str]
    failures: list[int]


def _unit(v):
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n), n


def classify_touch(region: Polygon, p, prev, nxt, tol: float) -> str:
    """Name the optimality condition met at ``p``, or ``"none"``.

    ``s`` is the sum of unit vectors from ``p`` to its neighbours; the touch is
    locally optimal iff ``s`` lies in the normal cone of the region at ``p``.
    Crossing means ``s`` vanishes, mirror-reflection means ``s`` is normal to
    the active edge, and the endpoint case means ``s`` is in the vertex cone
    (the band wraps the vertex with an enclosing angle of at least pi).
    """
    (ux, uy), nu = _unit((prev[0] - p[0], prev[1] - p[1])) if dist(prev, p) > EPS else ((0.0, 0.0), 0.0)
    (vx, vy), nv = _unit((nxt[0] - p[0], nxt[1] - p[1])) if dist(nxt, p) > EPS else ((0.0, 0.0), 0.0)
    if nu == 0.0 or nv == 0.0:
        # touch point coincides with a neighbour: the straight path is kept
        return "crossing" if region.contains(p, FEAS_TOL) else "none"
    sx, sy = ux + vx, uy + vy
    if math.hypot(sx, sy) <= tol:
        return "crossing" if region.contains(p, FEAS_TOL) else "none"
    vs = region.vertices
    m = len(vs)
    if m == 1:
        return "endpoint" if dist(vs[0], p) <= FEAS_TOL else "none"
    for j, v in enumerate(vs):
        if dist(v, p) <= FEAS_TOL:
            if m == 2:
                gens = [vs[1 - j]]
            else:
                gens = [vs[j - 1], vs[(j + 1) % m]]
                turn = (v[0] - vs[j - 1][0]) * (vs[(j + 1) % m][1] - v[1]) - (
                    v[1] - vs[j - 1][1]) * (vs[(j + 1) % m][0] - v[0])
                if turn < 0.0:
                    return "none"  # reflex vertex: only a straight pass is optimal
            for g in gens:
                (gx, gy), _ = _unit((g[0] - v[0], g[1] - v[1]))
                if sx * gx + sy * gy > tol:
                    return "none"
            return "endpoint"
    for a, b in region.edges:
        if _seg_gap(a, b, p) <= FEAS_TOL:
            (tx, ty), _ = _unit((b[0] - a[0], b[1] - a[1]))
            if abs(sx * tx + sy * ty) > tol:
                return "none"
            if m >= 3 and (-ty * sx + tx * sy) > tol:
                return "none"  # s points into the region
            return "mirror"
    return "none"


def _seg_gap(a, b, p) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    u = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)
    u = min(1.0, max(0.0, u))
    return math.hypot(a[0] + u * dx - p[0], a[1] + u * dy - p[1])


def check_band_conditions(tour, seq: VisitSequence, tol: float = 1e-5) -> BandReport:
    """Classify every touch point; the tour passes when none is ``"none"``.

    A run of coinciding touch points is judged as one point of the
    intersection of its regions, against the neighbours outside the run.
    """
    points = tour.points if isinstance(tour, BandTour) else tuple(tour)
    regions = seq.regions
    kinds = [None] * len(points)
    for i, j in coincident_runs(points):
        inter = _run_region(regions, i, j)
        if inter is None and not all(regions[t].contains(points[i], FEAS_TOL)
                                     for t in range(i, j + 1)):
            kind = "none"
        else:
            prev = points[i - 1] if i > 0 else seq.depot
            nxt = points[j + 1] if j + 1 < len(points) else seq.depot
            kind = classify_touch(inter if inter is not None else regions[i],
                                  points[i], prev, nxt, tol)
        for t in range(i, j + 1):
            kinds[t] = kind
    for i, (p, r) in enumerate(zip(points, regions)):
        if kinds[i] is None:
            prev, nxt = _neighbours(i, points, seq.depot)
            kinds[i] = classify_touch(r, p, prev, nxt, tol)
    failures = [i for i, kind in enumerate(kinds) if kind == "none"]
    return BandReport(not failures, kinds, failures)


# ---------------------------------------------------------------------------
# order enumeration


def _respects(perm, pairs) -> bool:
    pos = {c: i for i, c in enumerate(perm)}
    return all(pos[a] < pos[b] for a, b in pairs)


def candidate_orders(k: int, precedence: Iterable = ()):
    """Visit orders worth evaluating.

    Without precedence a tour and its reverse have equal length, so only orders
    with ``perm[0] < perm[-1]`` are produced.
    """
    pairs = list(precedence or ())
    for perm in itertools.permutations(range(k)):
        if pairs:
            if _respects(perm, pairs):
                yield perm
        elif k < 2 or perm[0] < perm[-1]:
            yield perm


def optimal_tour_over_regions(
    depot,
    regions: Sequence[Polygon],
    restarts: int = 1,
    seed: int = 0,
    precedence: Iterable = (),
    tol: float = SWEEP_TOL,
) -> tuple[tuple[int, ...], BandTour]:
    """Shortest closed tour through ``regions`` over all visit orders.

    ``precedence`` holds (before, after) pairs of local region indices.
    Non-convex sequences get ``restarts`` runs (the centroid seed plus random
    boundary seeds); all-convex ones need a single run.
    """
    k = len(regions)
    if k > MAX_SEQUENCE:
        raise GuardError(f"sequence of {k} regions exceeds the limit of {MAX_SEQUENCE}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if k == 0:
        return (), BandTour((), 0.0)
    depot = as_point(depot)
    convex = all(r.is_convex for r in regions)
    found = []
    for perm in candidate_orders(k, precedence):
        seq = VisitSequence(depot, tuple(regions[j] for j in perm))
        band = elastic_improv(seq, tol=tol)
        if not convex and restarts > 1:
            rng = np.random.default_rng([seed, *perm])
            for _ in range(restarts - 1):
                other = elastic_improv(seq, init=random_init(seq, rng), tol=tol)
                if other.length < band.length:
                    band = other
        found.append((perm, band))
    if not found:
        raise GuardError("no visit order satisfies the precedence constraints")
    # orders tied up to rounding (e.g. two regions served at one shared point)
    # resolve to the lexicographically smallest permutation
    shortest = min(band.length for _, band in found)
    cut = shortest + TIE_REL * shortest
    return min((perm, band) for perm, band in found if band.length <= cut)
