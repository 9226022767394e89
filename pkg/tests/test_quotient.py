import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conic_carrier.arrangements import CovectorFamily, refines, union_family
from conic_carrier.cones import ConeSpec, extreme_dual_rays, quotient_by_lineality
from conic_carrier.families import FIXTURES, WEDGE
from conic_carrier.quotient import (
    Partition,
    bounded_conic_quotient,
    bounded_separator,
    compare_layers,
    exact_quotient_with_separator,
    quotient_transitions,
    word_pair_domain,
)
from oracles import naive_quotient, random_carrier, random_family

WEDGE_RAYS = extreme_dual_rays(WEDGE)
seeds = st.integers(0, 10**6)


def test_domain_order_and_size():
    dom = word_pair_domain(("a", "b"), 1)
    assert dom == [((), ()), ((), ("a",)), ((), ("b",)), (("a",), ()), (("b",), ())]


@pytest.mark.parametrize("name", sorted(FIXTURES))
@pytest.mark.parametrize("horizon", [0, 1, 2, 3])
def test_matches_naive_rewalk_on_fixtures(name, horizon):
    c = FIXTURES[name]()
    res = bounded_conic_quotient(c, WEDGE_RAYS, horizon)
    raw, stable, neg, evals = naive_quotient(c, WEDGE_RAYS.rays, horizon)
    assert res.raw_partition.as_sets() == raw
    assert res.stable_partition.as_sets() == stable
    assert (len(res.witnesses), res.ray_evals) == (neg, evals)


def test_matches_naive_rewalk_on_random_carriers():
    rng = random.Random(2024)
    for _ in range(25):
        c = random_carrier(rng, with_tau=rng.random() < 0.5)
        h = rng.randint(0, 3)
        res = bounded_conic_quotient(c, WEDGE_RAYS, h)
        raw, stable, neg, evals = naive_quotient(c, WEDGE_RAYS.rays, h)
        assert res.raw_partition.as_sets() == raw
        assert res.stable_partition.as_sets() == stable
        assert (len(res.witnesses), res.ray_evals) == (neg, evals)


def test_witnesses_verify_and_first_only_truncates():
    c = FIXTURES["resource-monitor-3"]()
    res = bounded_conic_quotient(c, WEDGE_RAYS, 2)
    assert res.witnesses and all(w.verify(c, WEDGE_RAYS) for w in res.witnesses)
    first = bounded_conic_quotient(c, WEDGE_RAYS, 2, first_witness_only=True)
    assert first.witnesses == res.witnesses[:1]
    assert first.stable_partition == res.stable_partition


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2))
def test_horizon_monotonicity(seed, h):
    c = random_carrier(random.Random(seed))
    lo = bounded_conic_quotient(c, WEDGE_RAYS, h)
    hi = bounded_conic_quotient(c, WEDGE_RAYS, h + 1)
    assert hi.raw_partition.refines(lo.raw_partition)
    assert hi.stable_partition.refines(lo.stable_partition)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 3))
def test_stable_partition_is_right_stable_and_finer_than_raw(seed, h):
    c = random_carrier(random.Random(seed))
    res = bounded_conic_quotient(c, WEDGE_RAYS, h)
    assert quotient_transitions(res.stable_partition, c) is not None
    assert res.stable_partition.refines(res.raw_partition)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 3))
def test_three_layer_chain(seed, h):
    c = random_carrier(random.Random(seed), with_tau=True)
    assert compare_layers(c, WEDGE_RAYS, h).chain_holds


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2))
def test_union_law(seed, h):
    rng = random.Random(seed)
    c = random_carrier(rng)
    s = CovectorFamily.of(random_family(rng, rng.randint(1, 3)))
    t = CovectorFamily.of(random_family(rng, rng.randint(1, 3)))
    ps = bounded_conic_quotient(c, s, h)
    pt = bounded_conic_quotient(c, t, h)
    pu = bounded_conic_quotient(c, union_family(s, t), h)
    assert pu.raw_partition.as_sets() == ps.raw_partition.meet(pt.raw_partition).as_sets()
    assert pu.stable_partition.as_sets() == ps.stable_partition.meet(pt.stable_partition).as_sets()


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 2))
def test_refinement_morphism(seed, h):
    rng = random.Random(seed)
    c = random_carrier(rng)
    s1 = CovectorFamily.of(random_family(rng, rng.randint(1, 2)))
    s2 = union_family(s1, CovectorFamily.of(random_family(rng, rng.randint(0, 2)), 2))
    if rng.random() < 0.5:
        s2 = CovectorFamily.of(random_family(rng, rng.randint(1, 3)))
    if refines(s1, s2):
        fine = bounded_conic_quotient(c, s2, h)
        coarse = bounded_conic_quotient(c, s1, h)
        assert fine.raw_partition.refines(coarse.raw_partition)
        assert fine.stable_partition.refines(coarse.stable_partition)


@settings(max_examples=30, deadline=None)
@given(seeds, st.lists(st.fractions(min_value=Fraction(1, 7), max_value=9), min_size=2, max_size=2), st.integers(0, 3))
def test_positive_rescaling_invariance(seed, factors, h):
    c = random_carrier(random.Random(seed))
    base = bounded_conic_quotient(c, WEDGE_RAYS, h)
    scaled = bounded_conic_quotient(c, WEDGE_RAYS.scaled(factors), h)
    assert scaled.raw_partition == base.raw_partition
    assert scaled.stable_partition == base.stable_partition
    k = factors[0]
    bigger = c.with_increments({key: tuple(k * e for e in v) for key, v in c.g.items()})
    assert bounded_conic_quotient(bigger, WEDGE_RAYS, h).raw_partition == base.raw_partition


HALF_SPACE = ConeSpec.from_hrep([[0, 1, 0], [0, 0, 1]])


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(0, 2))
def test_lineality_invariance(seed, h):
    rng = random.Random(seed)
    c = random_carrier(rng, d=3, cone=HALF_SPACE)
    rays = extreme_dual_rays(HALF_SPACE)
    base = bounded_conic_quotient(c, rays, h)
    shifted = c.with_increments({k: (v[0] + rng.randint(-5, 5),) + v[1:] for k, v in c.g.items()})
    assert bounded_conic_quotient(shifted, rays, h).stable_partition == base.stable_partition
    proj, projected = quotient_by_lineality(HALF_SPACE)
    from conic_carrier.carrier import WeightedCarrier

    chart = WeightedCarrier(
        projected.dim, c.alphabet, c.states, c.initial, dict(c.delta),
        {k: proj.project(v) for k, v in c.g.items()}, {p: proj.project(v) for p, v in c.tau.items()}, projected,
    )
    assert bounded_conic_quotient(chart, extreme_dual_rays(projected), h).stable_partition == base.stable_partition


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 3))
def test_separator_quotient_equals_bounded_stable_partition(seed, h):
    c = random_carrier(random.Random(seed))
    bounded = bounded_conic_quotient(c, WEDGE_RAYS, h).stable_partition
    exact = exact_quotient_with_separator(c, WEDGE_RAYS, bounded_separator(h))
    assert exact.stable_partition.as_sets() == bounded.as_sets()
    assert exact.transitions


def test_separator_split_log_names_witnesses():
    c = FIXTURES["two-state"]()
    res = exact_quotient_with_separator(c, WEDGE_RAYS, bounded_separator(2))
    assert len(res.stable_partition) == 2
    assert res.splits[0]["kind"] in ("future", "successor")


def test_partition_meet_and_refines():
    a = Partition((("p", "q"), ("r",)))
    b = Partition((("p",), ("q", "r")))
    m = a.meet(b)
    assert m.as_sets() == Partition.discrete(["p", "q", "r"]).as_sets()
    assert m.refines(a) and m.refines(b) and not a.refines(b)
    assert Partition.discrete("pq").refines(Partition.trivial("pq"))
