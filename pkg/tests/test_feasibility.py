from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conic_carrier.feasibility import LinearSystem, check_feasible, constraint, in_conic_hull, less_than
from oracles import naive_feasible


def test_contradictory_strict_pair():
    sys = LinearSystem(1, [constraint([1], ">"), constraint([-1], ">")])
    assert check_feasible(sys).status == "INFEASIBLE"


def test_open_orthant_has_a_witness():
    sys = LinearSystem(2, [constraint([1, 0], ">"), constraint([0, 1], ">")])
    res = check_feasible(sys)
    assert res.feasible and sys.satisfied_by(res.witness)


def test_strict_and_equality_mix():
    # x = y, x < 0, y > 0 has no solution
    sys = LinearSystem(2, [constraint([1, -1], "="), less_than([1, 0]), constraint([0, 1], ">")])
    assert not check_feasible(sys)


def test_inhomogeneous_bounds():
    sys = LinearSystem(1, [constraint([1], ">", "1/3"), less_than([1], "1/2")])
    res = check_feasible(sys)
    assert res.feasible and Fraction(1, 3) < res.witness[0] < Fraction(1, 2)
    assert not check_feasible(LinearSystem(1, [constraint([1], ">=", 1), less_than([1], 1)]))


def test_conic_hull_membership():
    gens = [[1, 0], [1, 1]]
    assert in_conic_hull([3, 1], gens)
    assert not in_conic_hull([0, 1], gens)
    assert in_conic_hull([0, 0], [])


rows = st.tuples(
    st.lists(st.integers(-3, 3), min_size=3, max_size=3),
    st.sampled_from([">=", ">", "="]),
    st.integers(-2, 2),
)


@settings(max_examples=150, deadline=None)
@given(st.lists(rows, min_size=1, max_size=6))
def test_fm_agrees_with_plain_elimination(system_rows):
    sys = LinearSystem(3, [constraint(c, k, b) for c, k, b in system_rows])
    res = check_feasible(sys)
    assert res.feasible == naive_feasible(system_rows, 3)
    if res.feasible:
        assert sys.satisfied_by(res.witness)
