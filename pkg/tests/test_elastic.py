import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvrg.elastic import (
    MAX_SEQUENCE,
    BandTour,
    VisitSequence,
    candidate_orders,
    check_band_conditions,
    classify_touch,
    elastic_improv,
    local_improv,
    optimal_tour_over_regions,
    random_init,
    tour_length,
)
from cvrg.errors import GeometryError, GuardError
from cvrg.geom import Point, Polygon, dist, region
from cvrg.instances import interlocking_counterexample, random_convex_sequence
from cvrg.oracles import sampled_region_tour, sampled_sequence_tour

ORIGIN = Point(0.0, 0.0)
TWO_SEGMENTS = VisitSequence(ORIGIN, (region([(1, -1), (1, 1)]), region([(2, -1), (2, 1)])))


def close(p, q, tol=1e-9):
    return dist(p, q) <= tol


# ---------------------------------------------------------------------------
# single moves


def test_local_improv_mirror_at_segment_midpoint():
    seq = VisitSequence(ORIGIN, (region([(-1, 1), (1, 1)]),))
    assert close(local_improv(0, [Point(0.7, 1)], seq), (0, 1))


def test_local_improv_crossing():
    seq = VisitSequence(ORIGIN, (region([(1, -1), (1, 1)]), region([(2, 0)])))
    assert close(local_improv(0, [Point(1, 0.8), Point(2, 0)], seq), (1, 0))


def test_local_improv_endpoint():
    seq = VisitSequence(ORIGIN, (region([(1, 1), (2, 1)]),))
    assert close(local_improv(0, [Point(1.5, 1)], seq), (1, 1))


# ---------------------------------------------------------------------------
# whole bands


def test_two_segments():
    band = elastic_improv(TWO_SEGMENTS, init=[(1, 0.9), (2, -0.7)])
    assert band.converged
    assert close(band.points[0], (1, 0), 1e-7) and close(band.points[1], (2, 0), 1e-7)
    assert band.length == pytest.approx(4.0, abs=1e-9)


def test_square_nearest_boundary_point():
    sq = region([(1, -0.5), (2, -0.5), (2, 0.5), (1, 0.5)])
    band = elastic_improv(VisitSequence(ORIGIN, (sq,)))
    assert close(band.points[0], (1, 0))
    assert band.length == pytest.approx(2.0)


def test_bad_init_rejected():
    with pytest.raises(GeometryError):
        elastic_improv(TWO_SEGMENTS, init=[(0, 0), (2, 0)])
    with pytest.raises(ValueError):
        elastic_improv(TWO_SEGMENTS, init=[(1, 0)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_sweeps_never_lengthen_the_tour(seed, k):
    seq = random_convex_sequence(seed, k)
    band = elastic_improv(seq, init=random_init(seq, np.random.default_rng(seed)))
    h = band.history
    assert all(b <= a + 1e-12 for a, b in zip(h, h[1:]))
    assert band.length == pytest.approx(tour_length(seq.depot, band.points), abs=1e-12)
    for p, r in zip(band.points, seq.regions):
        assert r.contains(p, 1e-7)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_convex_band_not_beaten_by_sampling_oracle(seed, k):
    seq = random_convex_sequence(seed, k)
    band = elastic_improv(seq)
    m = 1000
    sampled, _ = sampled_sequence_tour(seq.depot, seq.regions, m)
    slack = sum(r.perimeter / m for r in seq.regions)
    assert band.length <= sampled + 1e-9
    assert band.length >= sampled - slack - 1e-9


def test_random_inits_agree_on_convex_sequences():
    for seed in range(10):
        seq = random_convex_sequence(seed, 3)
        rng = np.random.default_rng(seed)
        bands = [elastic_improv(seq, init=random_init(seq, rng)) for _ in range(6)]
        ref = bands[0]
        for b in bands[1:]:
            assert b.length == pytest.approx(ref.length, abs=1e-6)
            assert max(dist(p, q) for p, q in zip(b.points, ref.points)) <= 1e-4


# ---------------------------------------------------------------------------
# band conditions


def test_band_check_on_two_segments():
    band = elastic_improv(TWO_SEGMENTS)
    rep = check_band_conditions(band, TWO_SEGMENTS)
    assert rep.ok and rep.failures == []
    moved = [band.points[0], Point(2, 0.05)]
    rep = check_band_conditions(moved, TWO_SEGMENTS)
    assert not rep.ok and 1 in rep.failures  # its neighbour is disturbed as well


def test_mirror_classification():
    seq = VisitSequence(ORIGIN, (region([(-1, 1), (1, 1)]),))
    rep = check_band_conditions(elastic_improv(seq), seq)
    assert rep.kinds == ["mirror"]


def test_endpoint_and_crossing_classification():
    seg = region([(1, 1), (2, 1)])
    assert classify_touch(seg, Point(1, 1), ORIGIN, ORIGIN, 1e-5) == "endpoint"
    assert classify_touch(seg, Point(1.5, 1), ORIGIN, ORIGIN, 1e-5) == "none"
    vert = region([(1, -1), (1, 1)])
    assert classify_touch(vert, Point(1, 0), ORIGIN, Point(2, 0), 1e-5) == "crossing"


def test_reflex_vertex_never_an_endpoint():
    P = Polygon([(0, 0), (2, 0), (1, 0.5), (2, 2), (0, 2)])  # reflex at (1, 0.5)
    assert classify_touch(P, Point(1, 0.5), Point(3, 0.5), Point(3, 0.6), 1e-5) == "none"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_converged_bands_pass_and_perturbed_fail(seed, k):
    seq = random_convex_sequence(seed, k)
    band = elastic_improv(seq)
    assert check_band_conditions(band, seq).ok
    rng = np.random.default_rng(seed)
    i = int(rng.integers(k))
    ang = rng.uniform(0, 2 * math.pi)
    moved = list(band.points)
    moved[i] = Point(moved[i].x + 0.05 * math.cos(ang), moved[i].y + 0.05 * math.sin(ang))
    assert not check_band_conditions(moved, seq).ok


def test_interlocking_has_two_distinct_bands():
    seq = interlocking_counterexample()
    rng = np.random.default_rng(1)
    found = {}
    for _ in range(30):
        band = elastic_improv(seq, init=random_init(seq, rng))
        found.setdefault(round(band.length, 6), band)
    assert len(found) >= 2
    lengths = sorted(found)
    assert lengths[-1] - lengths[0] > 1e-3
    for band in found.values():
        assert check_band_conditions(band, seq).ok


def test_interlocking_symmetric_bands_tie():
    seq = interlocking_counterexample(depot_shift=0.0)
    left = elastic_improv(seq, init=[(0, 0.5), (-1.5, 1.5)])
    right = elastic_improv(seq, init=[(0, 0.5), (1.5, 1.5)])
    assert left.length == pytest.approx(right.length, abs=1e-9)
    assert dist(left.points[1], right.points[1]) > 1.0


# ---------------------------------------------------------------------------
# order enumeration


def test_candidate_orders_drop_reversals():
    orders = list(candidate_orders(4))
    assert len(orders) == 12
    assert all(p[0] < p[-1] for p in orders)
    with_pair = list(candidate_orders(3, [(2, 0)]))
    assert len(with_pair) == 3 and all(p.index(2) < p.index(0) for p in with_pair)


def test_optimal_tour_k1_and_symmetric_pair():
    sq = region([(1, -0.5), (2, -0.5), (2, 0.5), (1, 0.5)])
    perm, band = optimal_tour_over_regions(ORIGIN, [sq])
    assert perm == (0,) and band.length == pytest.approx(2.0)
    _, band = optimal_tour_over_regions(ORIGIN, list(reversed(TWO_SEGMENTS.regions)))
    assert band.length == pytest.approx(4.0, abs=1e-9)


def test_optimal_tour_matches_sampling_over_all_orders():
    for seed in range(4):
        seq = random_convex_sequence(seed, 3, spread=3.0)
        _, band = optimal_tour_over_regions(seq.depot, seq.regions)
        sampled, _ = sampled_region_tour(seq.depot, seq.regions, 1000)
        assert band.length <= sampled + 1e-9
        assert band.length == pytest.approx(sampled, abs=1e-2)


def test_order_guard():
    regions = [region([(i, 1)]) for i in range(MAX_SEQUENCE + 1)]
    with pytest.raises(GuardError):
        optimal_tour_over_regions(ORIGIN, regions)


def test_band_tour_is_plain_data():
    band = BandTour((Point(1, 0),), 2.0)
    assert band.converged and band.sweeps == 0
