"""Planar primitives and closed-form single-point minimizers.

All tolerances are absolute, in workspace units. Instances are generated at
O(1)-to-O(100) scale so a fixed 1e-9 is adequate for on-line and on-boundary
tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import GeometryError

EPS = 1e-9
DUP_EPS = 1e-12
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class Point(NamedTuple):
    x: float
    y: float

    def __add__(self, other):
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])

    def __mul__(self, s):
        return Point(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self):
        return Point(-self.x, -self.y)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)


def as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GeometryError(f"non-finite coordinate {p!r}")
    return Point(x, y)


def dist(p, q) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def cross(o, a, b) -> float:
    """z-component of (a - o) x (b - o); positive for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def path_length(points: Sequence) -> float:
    return sum(dist(points[i], points[i + 1]) for i in range(len(points) - 1))


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))
        if dist(self.a, self.b) <= DUP_EPS:
            raise GeometryError("degenerate segment: endpoints coincide")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


# ---------------------------------------------------------------------------
# low-level helpers on raw coordinates


def _closest_on_seg(a, b, q) -> Point:
    dx, dy = b[0] - a[0], b[1] - a[1]
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return Point(a[0], a[1])
    u = ((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / l2
    u = 0.0 if u < 0.0 else (1.0 if u > 1.0 else u)
    return Point(a[0] + u * dx, a[1] + u * dy)


def _dist_to_seg(a, b, q) -> float:
    return dist(_closest_on_seg(a, b, q), q)


def _golden_min_on_seg(p0, p1, a, b, tol=1e-10):
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    seg_len = math.hypot(dx, dy)

    def f(u):
        x, y = p0[0] + u * dx, p0[1] + u * dy
        return math.hypot(x - a[0], y - a[1]) + math.hypot(x - b[0], y - b[1])

    lo, hi = 0.0, 1.0
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while (hi - lo) * seg_len > tol:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    best_u, best = 0.5 * (lo + hi), f(0.5 * (lo + hi))
    # the convex objective may be minimized at an end of the segment
    for u in (0.0, 1.0):
        v = f(u)
        if v < best:
            best_u, best = u, v
    return Point(p0[0] + best_u * dx, p0[1] + best_u * dy), best


def _min_sum_on_seg(p0, p1, a, b):
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    seg_len = math.hypot(dx, dy)
    if seg_len <= DUP_EPS:
        p = Point(p0[0], p0[1])
        return p, dist(p, a) + dist(p, b)
    # signed distances to the supporting line
    sa = (dx * (a[1] - p0[1]) - dy * (a[0] - p0[0])) / seg_len
    sb = (dx * (b[1] - p0[1]) - dy * (b[0] - p0[0])) / seg_len
    if abs(sa) <= EPS or abs(sb) <= EPS:
        return _golden_min_on_seg(p0, p1, a, b)
    bx, by = b[0], b[1]
    if sa * sb > 0.0:
        # mirror b across the line; the straight path a -> b' then crosses it
        nx, ny = -dy / seg_len, dx / seg_len
        bx, by = bx - 2.0 * sb * nx, by - 2.0 * sb * ny
        sb = -sb
    lam = sa / (sa - sb)
    xx, xy = a[0] + lam * (bx - a[0]), a[1] + lam * (by - a[1])
    u = ((xx - p0[0]) * dx + (xy - p0[1]) * dy) / (seg_len * seg_len)
    u = 0.0 if u < 0.0 else (1.0 if u > 1.0 else u)
    p = Point(p0[0] + u * dx, p0[1] + u * dy)
    return p, dist(p, a) + dist(p, b)


def _seg_params_on(a, b, p, q):
    """Parameters t in [0, 1] where a + t(b - a) meets the closed segment pq."""
    rx, ry = b[0] - a[0], b[1] - a[1]
    sx, sy = q[0] - p[0], q[1] - p[1]
    denom = rx * sy - ry * sx
    wx, wy = p[0] - a[0], p[1] - a[1]
    r2 = rx * rx + ry * ry
    if abs(denom) <= 1e-15 * max(1.0, r2, sx * sx + sy * sy):
        # parallel: only collinear overlap matters
        if r2 == 0.0 or abs(wx * ry - wy * rx) > EPS * math.sqrt(r2):
            return []
        t0 = (wx * rx + wy * ry) / r2
        t1 = ((q[0] - a[0]) * rx + (q[1] - a[1]) * ry) / r2
        lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
        return [lo, hi] if lo <= hi else []
    t = (wx * sy - wy * sx) / denom
    u = (wx * ry - wy * rx) / denom
    tt = 1e-12
    if -tt <= t <= 1.0 + tt and -tt <= u <= 1.0 + tt:
        return [min(1.0, max(0.0, t))]
    return []


def segments_intersect(p1, p2, q1, q2) -> bool:
    return bool(_seg_params_on(p1, p2, q1, q2))


# ---------------------------------------------------------------------------
# polygons


def convex_hull(points: Iterable) -> list[Point]:
    """Andrew's monotone chain; counter-clockwise, collinear points dropped."""
    pts = sorted(set(as_point(p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _signed_area(vs) -> float:
    s = 0.0
    m = len(vs)
    for i in range(m):
        x0, y0 = vs[i]
        x1, y1 = vs[(i + 1) % m]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _normalize(vertices) -> tuple[Point, ...]:
    vs = [as_point(v) for v in vertices]
    if not vs:
        raise GeometryError("polygon needs at least one vertex")
    out: list[Point] = []
    for v in vs:
        if not out or dist(out[-1], v) > DUP_EPS:
            out.append(v)
    while len(out) > 1 and dist(out[0], out[-1]) <= DUP_EPS:
        out.pop()
    if len(out) <= 2:
        return tuple(out)
    far = max(out, key=lambda v: dist(v, out[0]))
    span = dist(far, out[0])
    if all(abs(cross(out[0], far, v)) <= 1e-12 * span * span for v in out):
        # every vertex collinear: keep the two extreme points
        ext = sorted(out, key=lambda v: (v[0] - out[0][0]) * (far[0] - out[0][0])
                     + (v[1] - out[0][1]) * (far[1] - out[0][1]))
        return (ext[0], ext[-1])
    area = _signed_area(out)
    if area < 0.0:
        out.reverse()
    # merge collinear vertices; a back-tracking spike makes the polygon non-simple
    changed = True
    while changed and len(out) >= 3:
        changed = False
        m = len(out)
        for i in range(m):
            p, v, q = out[i - 1], out[i], out[(i + 1) % m]
            e1 = dist(p, v)
            e2 = dist(v, q)
            if abs(cross(p, v, q)) <= 1e-12 * e1 * e2:
                dot = (v[0] - p[0]) * (q[0] - v[0]) + (v[1] - p[1]) * (q[1] - v[1])
                if dot < 0.0 and m > 3:
                    raise GeometryError("polygon boundary doubles back on itself")
                del out[i]
                changed = True
                break
    if len(out) <= 2:
        # sliver: keep the two farthest-apart input vertices
        return max(((p, q) for i, p in enumerate(vs) for q in vs[i + 1:]),
                   key=lambda pq: dist(*pq))
    return tuple(out)


class Polygon:
    """A simple polygon stored counter-clockwise.

    One vertex is a point region and two vertices a segment region; both are
    treated as (degenerate) convex sets.
    """

    __slots__ = ("vertices", "is_convex", "diameter", "_edges")

    def __init__(self, vertices: Iterable):
        vs = _normalize(vertices)
        self.vertices: tuple[Point, ...] = vs
        m = len(vs)
        if m == 1:
            self._edges = ()
        elif m == 2:
            self._edges = ((vs[0], vs[1]),)
        else:
            self._edges = tuple((vs[i], vs[(i + 1) % m]) for i in range(m))
            self._check_simple()
        self.is_convex = m <= 2 or all(
            cross(vs[i - 1], vs[i], vs[(i + 1) % m]) > 0.0 for i in range(m)
        )
        self.diameter = max(
            (dist(p, q) for i, p in enumerate(vs) for q in vs[i + 1:]), default=0.0
        )

    def _check_simple(self):
        es = self._edges
        m = len(es)
        for i in range(m):
            for j in range(i + 1, m):
                if j == i + 1 or (i == 0 and j == m - 1):
                    continue
                if segments_intersect(es[i][0], es[i][1], es[j][0], es[j][1]):
                    raise GeometryError("polygon is self-intersecting")

    # -- identity -----------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"{type(self).__name__}({list(self.vertices)!r})"

    # -- shape queries ------------------------------------------------------
    @property
    def kind(self) -> str:
        m = len(self.vertices)
        return "point" if m == 1 else "segment" if m == 2 else "polygon"

    @property
    def edges(self) -> tuple:
        return self._edges

    @property
    def perimeter(self) -> float:
        """Length of the closed boundary walk (a segment is walked out and back)."""
        if len(self.vertices) == 2:
            return 2.0 * dist(*self.vertices)
        return sum(dist(p, q) for p, q in self._edges)

    @property
    def area(self) -> float:
        return _signed_area(self.vertices) if len(self.vertices) >= 3 else 0.0

    def centroid(self) -> Point:
        vs = self.vertices
        if len(vs) <= 2:
            return Point(sum(v.x for v in vs) / len(vs), sum(v.y for v in vs) / len(vs))
        a = cx = cy = 0.0
        m = len(vs)
        for i in range(m):
            x0, y0 = vs[i]
            x1, y1 = vs[(i + 1) % m]
            c = x0 * y1 - x1 * y0
            a += c
            cx += (x0 + x1) * c
            cy += (y0 + y1) * c
        return Point(cx / (3.0 * a), cy / (3.0 * a))

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def boundary_distance(self, q) -> float:
        if len(self.vertices) == 1:
            return dist(self.vertices[0], q)
        return min(_dist_to_seg(p0, p1, q) for p0, p1 in self._edges)

    def contains(self, q, tol: float = EPS) -> bool:
        """Point-in-polygon test; boundary points (within ``tol``) count as inside."""
        if self.boundary_distance(q) <= tol:
            return True
        if len(self.vertices) <= 2:
            return False
        x, y = q[0], q[1]
        inside = False
        for (x0, y0), (x1, y1) in self._edges:
            if (y0 > y) != (y1 > y):
                xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
                if xi > x:
                    inside = not inside
        return inside

    def point_at(self, s: float) -> Point:
        """Point at arc-length ``s`` along the closed boundary walk."""
        vs = self.vertices
        if len(vs) == 1:
            return vs[0]
        walk = list(self._edges)
        if len(vs) == 2:
            walk.append((vs[1], vs[0]))
        total = self.perimeter
        s = s % total if total > 0 else 0.0
        for p, q in walk:
            l = dist(p, q)
            if s <= l:
                u = s / l if l > 0 else 0.0
                return Point(p.x + u * (q.x - p.x), p.y + u * (q.y - p.y))
            s -= l
        return walk[-1][1]

    def boundary_samples(self, m: int) -> list[Point]:
        """``m`` points equally spaced in arc length along the boundary walk."""
        per = self.perimeter
        return [self.point_at(per * j / m) for j in range(m)]

    def translated(self, dx: float, dy: float) -> "Polygon":
        return type(self)([(v.x + dx, v.y + dy) for v in self.vertices])

    def scaled(self, alpha: float, about=(0.0, 0.0)) -> "Polygon":
        ox, oy = about
        return type(self)(
            [(ox + alpha * (v.x - ox), oy + alpha * (v.y - oy)) for v in self.vertices]
        )


class ConvexPolygon(Polygon):
    """A polygon that is checked to be convex at construction."""

    __slots__ = ()

    def __init__(self, vertices: Iterable):
        super().__init__(vertices)
        if not self.is_convex:
            raise GeometryError("polygon is not convex")


def region(vertices: Iterable) -> Polygon:
    """Build a ConvexPolygon when possible, else a general Polygon."""
    p = Polygon(vertices)
    if p.is_convex:
        return ConvexPolygon(p.vertices)
    return p


# ---------------------------------------------------------------------------
# public minimizers


def closest_point_on_segment(s: Segment, q) -> Point:
    return _closest_on_seg(s.a, s.b, q)


def closest_point_on_polygon(P: Polygon, q) -> Point:
    q = Point(float(q[0]), float(q[1]))
    if len(P.vertices) == 1:
        return P.vertices[0]
    if P.contains(q):
        return q
    best, best_d = None, math.inf
    for p0, p1 in P.edges:
        c = _closest_on_seg(p0, p1, q)
        d = dist(c, q)
        if d < best_d:
            best, best_d = c, d
    return best


def min_sum_point_on_segment(s: Segment, a, b) -> tuple[Point, float]:
    """Point ``p`` of ``s`` minimizing |p - a| + |p - b|, with the minimum."""
    return _min_sum_on_seg(s.a, s.b, a, b)


def pass_through_point(P: Polygon, a, b):
    """A point of segment ab inside ``P``, or None when ab misses ``P``.

    Picks the midpoint of the longest stretch of ab inside ``P`` so the choice
    depends only on (a, b) and is symmetric in them.
    """
    vs = P.vertices
    if len(vs) == 1:
        v = vs[0]
        return v if _dist_to_seg(a, b, v) <= EPS else None
    if dist(a, b) <= DUP_EPS:
        return Point(a[0], a[1]) if P.contains(a) else None
    ts = []
    for p0, p1 in P.edges:
        ts.extend(_seg_params_on(a, b, p0, p1))
    a_in = P.contains(a)
    if not ts and not a_in:
        return None
    ts = sorted(set(ts + [0.0, 1.0]))
    ax, ay = a[0], a[1]
    rx, ry = b[0] - ax, b[1] - ay
    best_lo = best_hi = None
    run_lo = None
    for t0, t1 in zip(ts, ts[1:]):
        tm = 0.5 * (t0 + t1)
        if P.contains((ax + tm * rx, ay + tm * ry)):
            if run_lo is None:
                run_lo = t0
            if best_lo is None or t1 - run_lo > best_hi - best_lo:
                best_lo, best_hi = run_lo, t1
        else:
            run_lo = None
    if best_lo is None:
        # ab only touches the boundary
        cands = [t for t in ts if P.contains((ax + t * rx, ay + t * ry))]
        if not cands:
            return None
        t = cands[0]
        return Point(ax + t * rx, ay + t * ry)
    t = 0.5 * (best_lo + best_hi)
    return Point(ax + t * rx, ay + t * ry)


def min_sum_point_on_region(P: Polygon, a, b) -> tuple[Point, float]:
    """Exact minimizer of |p - a| + |p - b| over a (possibly non-convex) region.

    If ab meets the region any meeting point is optimal. Otherwise the optimum
    lies on the boundary and each edge is solved in closed form.
    """
    vs = P.vertices
    if len(vs) == 1:
        v = vs[0]
        return v, dist(v, a) + dist(v, b)
    if len(vs) == 2:
        return _min_sum_on_seg(vs[0], vs[1], a, b)
    p = pass_through_point(P, a, b)
    if p is not None:
        return p, dist(p, a) + dist(p, b)
    best, best_c = None, math.inf
    for p0, p1 in P.edges:
        q, c = _min_sum_on_seg(p0, p1, a, b)
        if c < best_c:
            best, best_c = q, c
    return best, best_c


def min_sum_point_on_convex(P: Polygon, a, b) -> tuple[Point, float]:
    if not P.is_convex:
        raise GeometryError("min_sum_point_on_convex needs a convex region")
    return min_sum_point_on_region(P, a, b)


def _clip_halfplane(poly, a, b):
    """Keep the part of a closed vertex loop left of the directed line a -> b."""
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        cp, cq = cross(a, b, p), cross(a, b, q)
        if cp >= -DUP_EPS:
            out.append(p)
        if (cp > DUP_EPS and cq < -DUP_EPS) or (cp < -DUP_EPS and cq > DUP_EPS):
            t = cp / (cp - cq)
            out.append(Point(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def intersect_convex(P: Polygon, Q: Polygon):
    """Intersection of two convex regions as a Polygon, or None if empty."""
    if not (P.is_convex and Q.is_convex):
        raise GeometryError("intersect_convex needs convex regions")
    if len(Q.vertices) < len(P.vertices):
        P, Q = Q, P
    if len(Q.vertices) <= 2:
        # point/segment against point/segment
        if len(P.vertices) == 1:
            v = P.vertices[0]
            return Polygon([v]) if Q.contains(v) else None
        if len(Q.vertices) == 1:
            v = Q.vertices[0]
            return Polygon([v]) if P.contains(v) else None
        (a, b), (c, d) = P.vertices, Q.vertices
        ts = _seg_params_on(a, b, c, d)
        if not ts:
            return None
        pts = [Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])) for t in ts]
        return Polygon(pts)
    loop = list(P.vertices)
    for a, b in Q.edges:
        loop = _clip_halfplane(loop, a, b)
        if not loop:
            return None
    return Polygon(loop)
