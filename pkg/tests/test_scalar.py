import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conic_carrier.carrier import WeightedCarrier
from conic_carrier.cones import extreme_dual_rays
from conic_carrier.families import WEDGE, generate, resource_monitor_3
from conic_carrier.quotient import bounded_conic_quotient
from conic_carrier.scalar import (
    CounterexampleKind,
    NegativeCycleError,
    build_potentials,
    detect_negative_cycle,
    fallback_workflow,
    project_by_ray,
    terminal_check,
)
from oracles import has_negative_simple_cycle, random_carrier

RAYS = extreme_dual_rays(WEDGE)


def _graph(seed, n, lo=-3, hi=4):
    rng = random.Random(seed)
    c = random_carrier(rng, n=n, k=rng.randint(1, 3), d=1, lo=lo, hi=hi, cone=None)
    return project_by_ray(c, (1,))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_bellman_ford_agrees_with_cycle_enumeration(seed, n):
    g = _graph(seed, n)
    search = detect_negative_cycle(g)
    assert (search.cycle is not None) == has_negative_simple_cycle(g)
    if search.cycle is not None:
        assert search.cycle.replay(g) == search.cycle.total_cost < 0
        with pytest.raises(NegativeCycleError):
            build_potentials(g, search)
    else:
        assert build_potentials(g, search).is_valid(g)


def test_resource_monitor_fallback():
    c = resource_monitor_3()
    result = fallback_workflow(c, RAYS)
    minus, plus = result.verdicts
    assert not minus.passed and minus.counterexample.kind is CounterexampleKind.NEGATIVE_CYCLE
    assert minus.counterexample.replay(project_by_ray(c, minus.ray)) == -2
    assert plus.passed and plus.certificate.is_valid(project_by_ray(c, plus.ray))
    assert not result.passed


def test_prior_witness_settles_the_ray():
    c = resource_monitor_3()
    prior = bounded_conic_quotient(c, RAYS, 1).witnesses
    result = fallback_workflow(c, RAYS, prior_witnesses=prior)
    v = result.verdicts[0]
    assert v.source == "conic-witness" and v.edge_scans == 0
    assert v.counterexample.replay(project_by_ray(c, v.ray)) == v.counterexample.total_cost == -2
    assert result.verdicts[1].passed


def test_restriction_to_unresolved_states():
    c = resource_monitor_3()
    result = fallback_workflow(c, RAYS, unresolved=["p0", "p1"])
    assert result.verdicts[0].passed


def test_positive_cell_needs_no_relaxation():
    result = fallback_workflow(generate("positive-cell"), RAYS)
    assert result.passed
    assert [v.relaxations for v in result.verdicts] == [0, 0]


def test_terminal_offsets_can_fail_without_cycles():
    c = WeightedCarrier(
        1, ("a",), ("p", "q"), "p", {("p", "a"): "q", ("q", "a"): "q"},
        {("p", "a"): (1,), ("q", "a"): (0,)}, {"q": (-3,)},
    )
    g = project_by_ray(c, (1,))
    cex = terminal_check(g, c.initial)
    assert cex is not None and cex.replay(g) == cex.total_cost == -2
    result = fallback_workflow(c, [(1,)])
    assert result.verdicts[0].source == "terminal"


def test_zero_rays_are_rejected():
    with pytest.raises(ValueError):
        fallback_workflow(resource_monitor_3(), [])
