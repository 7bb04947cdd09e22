import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cvrg.errors import GeometryError
from cvrg.geom import (
    ConvexPolygon,
    Point,
    Polygon,
    Segment,
    closest_point_on_polygon,
    closest_point_on_segment,
    convex_hull,
    dist,
    intersect_convex,
    min_sum_point_on_convex,
    min_sum_point_on_region,
    min_sum_point_on_segment,
    region,
)

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]

coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
pt = st.tuples(coord, coord)


def close(p, q, tol=1e-9):
    return dist(p, q) <= tol


def dense_boundary(P, m=20000):
    return np.array(P.boundary_samples(m))


def sampled_min_sum(P, a, b, m=20000):
    """min |p-a|+|p-b| over evenly spaced boundary samples."""
    pts = dense_boundary(P, m)
    f = np.hypot(*(pts - a).T) + np.hypot(*(pts - b).T)
    return float(f.min())


@st.composite
def convex_polys(draw, lo=3, hi=7):
    pts = draw(st.lists(pt, min_size=lo, max_size=hi))
    hull = convex_hull(pts)
    assume(len(hull) >= 3)
    P = Polygon(hull)
    assume(P.area > 1e-2)
    return P


# ---------------------------------------------------------------------------
# closest points


def test_closest_on_segment_examples():
    s = Segment((0, 0), (2, 0))
    assert close(closest_point_on_segment(s, (1, 5)), (1, 0))
    assert close(closest_point_on_segment(s, (-3, 1)), (0, 0))
    assert close(closest_point_on_segment(Segment((0, 0), (1, 1)), (1, 0)), (0.5, 0.5))


def test_closest_on_polygon_examples():
    P = Polygon(SQUARE)
    assert close(closest_point_on_polygon(P, (0.5, 0.5)), (0.5, 0.5))
    assert close(closest_point_on_polygon(P, (2, 0.5)), (1, 0.5))
    assert close(closest_point_on_polygon(P, (2, 2)), (1, 1))


@settings(max_examples=60, deadline=None)
@given(convex_polys(), pt)
def test_closest_point_beats_every_boundary_sample(P, q):
    c = closest_point_on_polygon(P, q)
    assert P.contains(c, 1e-9)
    if P.contains(q):
        assert close(c, q)
    else:
        best = np.hypot(*(dense_boundary(P, 4000) - q).T).min()
        assert dist(c, q) <= best + 1e-9


def test_degenerate_segment_rejected():
    with pytest.raises(GeometryError):
        Segment((1, 1), (1, 1))


# ---------------------------------------------------------------------------
# min |p - a| + |p - b|


def test_min_sum_on_segment_examples():
    s = Segment((-1, 1), (1, 1))
    p, c = min_sum_point_on_segment(s, (0, 0), (0, 2))
    assert close(p, (0, 1)) and c == pytest.approx(2.0, abs=1e-12)
    p, c = min_sum_point_on_segment(s, (-1, 0), (1, 0))
    assert close(p, (0, 1)) and c == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    p, c = min_sum_point_on_segment(s, (5, 0), (5, 2))
    assert close(p, (1, 1)) and c == pytest.approx(2 * math.sqrt(17), abs=1e-12)


def test_min_sum_on_segment_matches_sampling():
    s = Segment((-1, 1), (1, 1))
    xs = np.linspace(-1, 1, 100_001)
    for a, b in [((-1, 0), (1, 0)), ((5, 0), (5, 2)), ((0.3, -2), (-0.4, 0.2))]:
        _, c = min_sum_point_on_segment(s, a, b)
        f = np.hypot(xs - a[0], 1 - a[1]) + np.hypot(xs - b[0], 1 - b[1])
        assert c <= f.min() + 1e-12
        assert c >= f.min() - 1e-6


def test_min_sum_on_convex_examples():
    P = ConvexPolygon([(-0.5, 0.5), (0.5, 0.5), (0.5, 1.5), (-0.5, 1.5)])
    p, c = min_sum_point_on_convex(P, (0, -1), (0, 3))
    assert c == pytest.approx(4.0, abs=1e-12)
    assert P.contains(p) and abs(p.x) <= 1e-12
    P = ConvexPolygon([(-0.5, 1), (0.5, 1), (0.5, 2), (-0.5, 2)])
    p, c = min_sum_point_on_convex(P, (-1, 0), (1, 0))
    assert close(p, (0, 1)) and c == pytest.approx(2 * math.sqrt(2), abs=1e-12)


def test_segment_region_reduces_to_segment_minimizer():
    seg = region([(-1, 1), (1, 1)])
    for a, b in [((-1, 0), (1, 0)), ((5, 0), (5, 2)), ((0, 0), (0, 2))]:
        p1, c1 = min_sum_point_on_convex(seg, a, b)
        p2, c2 = min_sum_point_on_segment(Segment((-1, 1), (1, 1)), a, b)
        assert c1 == pytest.approx(c2, abs=1e-12) and close(p1, p2, 1e-9)


def test_min_sum_on_convex_rejects_nonconvex():
    with pytest.raises(GeometryError):
        min_sum_point_on_convex(Polygon([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)]), (0, -1), (3, 3))


@settings(max_examples=60, deadline=None)
@given(convex_polys(), pt, pt)
def test_min_sum_on_convex_is_the_sampled_minimum(P, a, b):
    p, c = min_sum_point_on_convex(P, a, b)
    assert P.contains(p, 1e-9)
    assert c == pytest.approx(dist(p, a) + dist(p, b), abs=1e-9)
    if P.contains(a) or P.contains(b):
        assert c <= dist(a, b) + 1e-9
    # never worse than any boundary sample, never better than the straight line
    assert c <= sampled_min_sum(P, np.array(a), np.array(b), 4000) + 1e-9
    assert c >= dist(a, b) - 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), pt, pt)
def test_min_sum_on_star_polygon_not_beaten_by_samples(seed, a, b):
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.3, 0.9, 10) * np.where(np.arange(10) % 2, 0.5, 1.0) * 3
    ang = np.sort(rng.uniform(0, 2 * np.pi, 10))
    assume(np.diff(ang).min() > 0.05)
    P = Polygon(list(zip(r * np.cos(ang), r * np.sin(ang))))
    p, c = min_sum_point_on_region(P, a, b)
    assert P.contains(p, 1e-9)
    assert c <= sampled_min_sum(P, np.array(a), np.array(b), 4000) + 1e-9


# ---------------------------------------------------------------------------
# polygons


def test_normalization_is_ccw_and_idempotent():
    cw = Polygon(list(reversed(SQUARE)))
    assert cw.area == pytest.approx(1.0)
    assert Polygon(cw.vertices) == cw
    with_collinear = Polygon([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1), (0, 1)])
    assert len(with_collinear.vertices) == 4
    assert with_collinear == cw


def test_degenerate_shapes():
    assert region([(2, 3)]).kind == "point"
    assert region([(0, 0), (1, 1), (2, 2)]).kind == "segment"
    seg = region([(0, 0), (2, 0)])
    assert seg.perimeter == pytest.approx(4.0)  # both sides of the segment
    assert isinstance(seg, ConvexPolygon)


def test_self_intersecting_polygon_rejected():
    with pytest.raises(GeometryError):
        Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])


def test_nonconvex_detected():
    P = region([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)])
    assert not P.is_convex and not isinstance(P, ConvexPolygon)
    assert P.contains((0.5, 1)) and not P.contains((1.8, 0.5))


@settings(max_examples=50, deadline=None)
@given(convex_polys(), st.floats(-5, 5), st.floats(-5, 5), st.floats(0.1, 4))
def test_transforms_commute_with_closest_point(P, dx, dy, alpha):
    q = Point(1.5, -2.0)
    c = closest_point_on_polygon(P, q)
    ct = closest_point_on_polygon(P.translated(dx, dy), (q.x + dx, q.y + dy))
    assert close(ct, (c.x + dx, c.y + dy), 1e-7)
    cs = closest_point_on_polygon(P.scaled(alpha), (alpha * q.x, alpha * q.y))
    assert close(cs, (alpha * c.x, alpha * c.y), 1e-7)


@settings(max_examples=60, deadline=None)
@given(convex_polys(), convex_polys())
def test_convex_intersection_membership(P, Q):
    inter = intersect_convex(P, Q)
    rng = np.random.default_rng(0)
    x0, y0, x1, y1 = P.bounds()
    for x, y in rng.uniform([x0, y0], [x1, y1], (200, 2)):
        q = (x, y)
        if not (P.contains(q) and Q.contains(q)):
            continue
        if inter is None:
            # only a grazing contact may be dropped
            assert min(P.boundary_distance(q), Q.boundary_distance(q)) < 1e-7
        else:
            assert inter.contains(q, 1e-7)
    if inter is not None:
        for v in inter.vertices:
            assert P.contains(v, 1e-7) and Q.contains(v, 1e-7)


def test_boundary_samples_are_on_the_boundary():
    P = Polygon([(0, 0), (3, 0), (3, 1), (1, 1), (1, 3), (0, 3)])
    for q in P.boundary_samples(97):
        assert P.boundary_distance(q) <= 1e-12
    assert P.point_at(0.0) == P.vertices[0]
