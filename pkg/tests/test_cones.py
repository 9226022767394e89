import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conic_carrier.cones import (
    ConeError,
    ConeSpec,
    extreme_dual_rays,
    extreme_face_sets,
    lineality_space,
    quotient_by_lineality,
    sigma,
)
from conic_carrier.exact import dot, vector
from conic_carrier.feasibility import in_conic_hull


def test_wedge_rays_in_lexicographic_order():
    assert extreme_dual_rays(ConeSpec.from_hrep([[1, 1], [-1, 1]])).rays == ((-1, 1), (1, 1))


def test_orthant_from_generators():
    rays = extreme_dual_rays(ConeSpec.from_vrep([[1, 0], [0, 1], [1, 1]]))
    assert rays.rays == ((0, 1), (1, 0))
    assert rays.lineality_basis == ()


def test_redundant_inequality_is_pruned_unless_kept():
    cone = ConeSpec.from_hrep([[-1, 1], [1, 1], [0, 1]])
    assert extreme_dual_rays(cone).rays == ((-1, 1), (1, 1))
    assert len(extreme_dual_rays(cone, keep_redundant=True)) == 3


def test_explicit_rays_keep_their_order_after_normalization():
    cone = ConeSpec.from_rays([[2, 2], [-1, 1], [3, 3]])
    assert extreme_dual_rays(cone).rays == ((1, 1), (-1, 1))


def test_halfplane_has_lineality():
    rays = extreme_dual_rays(ConeSpec.from_vrep([[1, 0], [-1, 0], [0, 1]]))
    assert rays.rays == ((0, 1),)
    assert rays.lineality_basis == ((1, 0),)


@pytest.mark.parametrize(
    "cone",
    [ConeSpec.from_vrep([[1, 0], [-1, 0]]), ConeSpec.from_hrep([[1, 0], [-1, 0], [0, 1]])],
)
def test_lower_dimensional_cones_are_rejected(cone):
    with pytest.raises(ConeError):
        extreme_dual_rays(cone)


def test_exactly_one_representation():
    with pytest.raises(ConeError):
        ConeSpec(2, hrep=((1, 0),), vrep=((1, 0),))
    with pytest.raises(ConeError):
        ConeSpec(2)


def test_json_round_trip():
    cone = ConeSpec.from_hrep([[-1, 1], [1, 1]])
    assert ConeSpec.from_json(cone.to_json()) == cone


def test_face_sets_of_a_boundary_profile():
    rays = extreme_dual_rays(ConeSpec.from_hrep([[-1, 1], [1, 1]]))
    neg, active = extreme_face_sets(sigma(rays, vector([4, 2])), rays)
    assert neg == {(-1, 1)} and active == frozenset()
    neg, active = extreme_face_sets(sigma(rays, vector([-2, 2])), rays)
    assert neg == frozenset() and active == {(1, 1)}


def test_lineality_quotient_chart():
    cone = ConeSpec.from_hrep([[0, 1, 0], [0, 0, 1]])
    proj, projected = quotient_by_lineality(cone)
    assert lineality_space(cone) == [(1, 0, 0)]
    assert projected.dim == 2
    x = vector([7, 2, -1])
    assert projected.contains(proj.project(x)) == cone.contains(x)


def _random_hrep(rng, d):
    while True:
        rows = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(rng.randint(d, d + 3))]
        rows = [r for r in rows if any(r)]
        cone = ConeSpec.from_hrep(rows, d)
        try:
            return cone, extreme_dual_rays(cone)
        except ConeError:
            continue


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_negative_profile_iff_not_in_cone(seed, x):
    cone, rays = _random_hrep(random.Random(seed), 3)
    x = vector(x)
    assert (-1 in sigma(rays, x)) == (not cone.contains(x))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_rays_generate_the_inequalities(seed):
    cone, rays = _random_hrep(random.Random(seed), 3)
    for a in cone.inequalities():
        assert in_conic_hull(a, list(rays.rays))
    # every ray is extreme: not in the hull of the others
    for r in rays.rays:
        assert not in_conic_hull(r, [s for s in rays.rays if s != r])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_generator_rays_decide_membership(seed):
    rng = random.Random(seed)
    gens = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(rng.randint(3, 6))]
    cone = ConeSpec.from_vrep(gens, 3)
    try:
        rays = extreme_dual_rays(cone)
    except ConeError:
        return
    for _ in range(10):
        x = vector([rng.randint(-4, 4) for _ in range(3)])
        assert (-1 not in sigma(rays, x)) == in_conic_hull(x, gens)
