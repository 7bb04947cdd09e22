import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cvrg.instances as instances_mod
from cvrg.errors import GuardError
from cvrg.formats import emit_instance
from cvrg.instances import (
    GenSpec,
    PARTITION_B,
    Placement,
    RegionKind,
    WeightRegime,
    gen_3partition_family,
    generate,
    interlocking_counterexample,
    random_convex_sequence,
)
from cvrg.routing import enumerate_feasible_subsets

specs = st.builds(
    GenSpec,
    n=st.integers(1, 25),
    placement=st.sampled_from(list(Placement)),
    weight_regime=st.sampled_from(list(WeightRegime)),
    k=st.integers(2, 10),
    region_kind=st.sampled_from(list(RegionKind)),
    workspace_side=st.sampled_from([1.0, 10.0, 100.0]),
    seed=st.integers(0, 2**32 - 1),
)


def test_same_seed_same_instance():
    spec = GenSpec(1, region_kind="point", seed=42)
    assert generate(spec) == generate(spec)
    assert emit_instance(generate(spec)) == emit_instance(generate(spec))
    assert generate(spec) != generate(GenSpec(1, region_kind="point", seed=43))


@settings(max_examples=60, deadline=None)
@given(specs)
def test_generated_instances_respect_the_spec(spec):
    inst = generate(spec)
    lo, hi = spec.weight_range
    side = spec.workspace_side
    assert inst.n == spec.n
    assert inst.depot == (side / 2, side / 2)
    for c in inst.customers:
        assert max(lo, 1e-6) <= c.weight <= hi
        assert c.region.diameter <= side / 10 + 1e-9
        x0, y0, x1, y1 = c.region.bounds()
        assert 0 <= x0 and x1 <= side and 0 <= y0 and y1 <= side
    kinds = {c.region.kind for c in inst.customers}
    want = {"point": {"point"}, "segment": {"segment"}}.get(spec.region_kind.value, {"polygon"})
    assert kinds == want
    if spec.region_kind is RegionKind.NONCONVEX_POLY:
        assert not any(c.region.is_convex for c in inst.customers)
    if spec.region_kind is RegionKind.CONVEX_POLY:
        assert all(c.region.is_convex for c in inst.customers)


def test_band_regime_caps_tour_size():
    inst = generate(GenSpec(20, weight_regime="band", k=7, seed=5))
    assert all(1 / 7 <= w <= 2 / 7 for w in inst.weights)
    assert max(bin(m).count("1") for m in enumerate_feasible_subsets(inst.weights)) <= 7


@pytest.mark.parametrize("placement, sign", [("gaussian", -1), ("inv_gaussian", 1)])
def test_gaussian_weight_distance_coupling(placement, sign):
    inst = generate(GenSpec(100, placement=placement, seed=11))
    mid = np.array(inst.depot)
    d = [np.hypot(*(np.array(r.centroid()) - mid)) for r in inst.regions]
    assert sign * np.corrcoef(inst.weights, d)[0, 1] > 0


def test_bad_specs_rejected():
    with pytest.raises(ValueError):
        GenSpec(5, k=1)
    with pytest.raises(ValueError):
        GenSpec(0)
    with pytest.raises(ValueError):
        GenSpec(5, placement="sideways")


def test_crowded_workspace_gives_up(monkeypatch):
    monkeypatch.setattr(instances_mod, "MAX_ATTEMPTS", 0)
    with pytest.raises(GuardError):
        generate(GenSpec(1, region_kind="segment", seed=0))


@pytest.mark.parametrize("m", [1, 2, 3])
def test_3partition_construction(m):
    inst = gen_3partition_family(m, 1e-3, seed=7)
    assert inst.n == 3 * m
    assert sum(inst.weights) == m  # dyadic weights sum exactly
    for c in inst.customers:
        assert 0.25 < c.weight < 0.5
        assert np.hypot(c.region.vertices[0].x - 1, c.region.vertices[0].y) <= 1e-3
    sizes = [int(s) for s in inst.provenance["sizes"].split()]
    assert sorted(sizes) == sorted(round(w * PARTITION_B) for w in inst.weights)


def test_3partition_rejects_large_eps():
    with pytest.raises(ValueError):
        gen_3partition_family(2, 0.2)


def test_interlocking_geometry():
    seq = interlocking_counterexample(0.0)
    inner, outer = seq.regions
    assert not inner.is_convex and not outer.is_convex
    assert seq.depot == (0.0, -1.0)
    assert interlocking_counterexample().depot == (0.1, -1.0)


def test_random_convex_sequences_are_convex_and_seeded():
    for seed in range(20):
        seq = random_convex_sequence(seed, 4)
        assert seq.all_convex and seq.k == 4
        assert seq == random_convex_sequence(seed, 4)
