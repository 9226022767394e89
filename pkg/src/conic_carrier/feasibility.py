"""Exact feasibility of mixed linear systems by Fourier-Motzkin elimination.

Constraints have the form ``a . x REL b`` with ``REL`` one of ``=``, ``>=``
or ``>``. Equalities are substituted away first, then the remaining
variables are eliminated in ascending index order. Strictness is tracked
through every combination, so strict systems are decided exactly without a
slack variable. A feasible verdict comes with a sample point built by
back-substitution through the stored elimination stages.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact import Covector, DimensionError, QVector, RationalLike, dot, to_rational, vector


class Relation(enum.Enum):
    EQ = "="
    GE = ">="
    GT = ">"


@dataclass(frozen=True)
class Constraint:
    coeffs: Covector
    relation: Relation
    rhs: Fraction = Fraction(0)

    def holds(self, x: Sequence[Fraction]) -> bool:
        v = dot(self.coeffs, x)
        if self.relation is Relation.EQ:
            return v == self.rhs
        if self.relation is Relation.GE:
            return v >= self.rhs
        return v > self.rhs


def constraint(coeffs: Iterable[RationalLike], relation: Relation | str, rhs: RationalLike = 0) -> Constraint:
    if isinstance(relation, str):
        relation = {"=": Relation.EQ, "==": Relation.EQ, ">=": Relation.GE, ">": Relation.GT}[relation]
    return Constraint(vector(coeffs), relation, to_rational(rhs))


def less_than(coeffs: Iterable[RationalLike], rhs: RationalLike = 0) -> Constraint:
    """``a . x < b`` rewritten as ``-a . x > -b``."""
    return Constraint(tuple(-c for c in vector(coeffs)), Relation.GT, -to_rational(rhs))


def at_most(coeffs: Iterable[RationalLike], rhs: RationalLike = 0) -> Constraint:
    return Constraint(tuple(-c for c in vector(coeffs)), Relation.GE, -to_rational(rhs))


@dataclass(frozen=True)
class LinearSystem:
    dimension: int
    constraints: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if len(c.coeffs) != self.dimension:
                raise DimensionError(
                    f"constraint of dimension {len(c.coeffs)} in a {self.dimension}-variable system"
                )

    @property
    def homogeneous(self) -> bool:
        return all(c.rhs == 0 for c in self.constraints)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return all(c.holds(x) for c in self.constraints)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Optional[QVector] = None

    @property
    def status(self) -> str:
        return "FEASIBLE" if self.feasible else "INFEASIBLE"

    def __bool__(self) -> bool:
        return self.feasible


# Internal rows are (coeff list, strict flag, rhs) meaning  a.x >= rhs  or  a.x > rhs.

def _normalize_row(coeffs, strict, rhs):
    """Scale a row to coprime integers (rhs included); positive factor only."""
    entries = list(coeffs) + [rhs]
    den = math.lcm(*(e.denominator for e in entries))
    ints = [int(e * den) for e in entries]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    if g == 0:
        return tuple(coeffs), strict, rhs
    return tuple(Fraction(v // g) for v in ints[:-1]), strict, Fraction(ints[-1] // g)


def _prune(rows):
    """Drop duplicates after normalization; a strict row dominates its non-strict twin.

    Returns None when a variable-free row is violated.
    """
    seen: dict = {}
    for coeffs, strict, rhs in rows:
        if all(c == 0 for c in coeffs):
            if (strict and not 0 > rhs) or (not strict and not 0 >= rhs):
                return None
            continue
        coeffs, strict, rhs = _normalize_row(coeffs, strict, rhs)
        key = (coeffs, rhs)
        seen[key] = seen.get(key, False) or strict
    return [(coeffs, strict, rhs) for (coeffs, rhs), strict in seen.items()]


def _bounds(rows, j, x):
    """Lower/upper bounds on variable ``j`` given values for variables > j."""
    lo = hi = None
    lo_strict = hi_strict = False
    for coeffs, strict, rhs in rows:
        a = coeffs[j]
        if a == 0:
            continue
        rest = sum((coeffs[k] * x[k] for k in range(j + 1, len(coeffs)) if coeffs[k] != 0), Fraction(0))
        bound = (rhs - rest) / a
        if a > 0:
            if lo is None or bound > lo or (bound == lo and strict):
                lo, lo_strict = bound, strict
        else:
            if hi is None or bound < hi or (bound == hi and strict):
                hi, hi_strict = bound, strict
    return lo, lo_strict, hi, hi_strict


def _choose(lo, lo_strict, hi, hi_strict) -> Fraction:
    def ok(v):
        if lo is not None and (v < lo or (lo_strict and v == lo)):
            return False
        if hi is not None and (v > hi or (hi_strict and v == hi)):
            return False
        return True

    if ok(Fraction(0)):
        return Fraction(0)
    if hi is None:
        return lo if not lo_strict else Fraction(math.floor(lo) + 1)
    if lo is None:
        return hi if not hi_strict else Fraction(math.ceil(hi) - 1)
    cand = lo if (not lo_strict and lo.denominator == 1) else Fraction(math.floor(lo) + 1)
    if ok(cand):
        return cand
    if not lo_strict:
        return lo
    if not hi_strict:
        return hi
    return (lo + hi) / 2


def check_feasible(system: LinearSystem) -> FeasibilityResult:
    """Decide ``system`` exactly; feasible results carry a verified sample point."""
    n = system.dimension
    eqs = []
    rows = []
    for c in system.constraints:
        if c.relation is Relation.EQ:
            eqs.append([list(c.coeffs), c.rhs])
        else:
            rows.append((list(c.coeffs), c.relation is Relation.GT, c.rhs))

    # Substitute equalities: pivot on the lowest-index variable.
    substitutions = []  # (pivot, coeffs, rhs): x_p = (rhs - sum_{k != p} coeffs_k x_k) / coeffs_p
    while eqs:
        coeffs, rhs = eqs.pop(0)
        p = next((k for k in range(n) if coeffs[k] != 0), None)
        if p is None:
            if rhs != 0:
                return FeasibilityResult(False)
            continue
        a = coeffs[p]

        def subst(cs, b, coeffs=coeffs, rhs=rhs, p=p, a=a):
            f = cs[p]
            if f == 0:
                return list(cs), b
            ratio = f / a
            new = [ck - ratio * ek for ck, ek in zip(cs, coeffs)]
            new[p] = Fraction(0)
            return new, b - ratio * rhs

        eqs = [list(subst(cs, b)) for cs, b in eqs]
        new_rows = []
        for cs, strict, b in rows:
            cs, b = subst(cs, b)
            new_rows.append((cs, strict, b))
        rows = new_rows
        substitutions.append((p, coeffs, rhs))

    rows = _prune(rows)
    if rows is None:
        return FeasibilityResult(False)

    stages = []
    for j in range(n):
        stages.append(rows)
        pos = [r for r in rows if r[0][j] > 0]
        neg = [r for r in rows if r[0][j] < 0]
        out = [r for r in rows if r[0][j] == 0]
        for cp, sp, bp in pos:
            for cn, sn, bn in neg:
                ap, an = cp[j], -cn[j]
                coeffs = tuple(an * u + ap * v for u, v in zip(cp, cn))
                out.append((coeffs, sp or sn, an * bp + ap * bn))
        rows = _prune(out)
        if rows is None:
            return FeasibilityResult(False)

    x = [Fraction(0)] * n
    for j in reversed(range(n)):
        x[j] = _choose(*_bounds(stages[j], j, x))
    for p, coeffs, rhs in reversed(substitutions):
        rest = sum((coeffs[k] * x[k] for k in range(n) if k != p), Fraction(0))
        x[p] = (rhs - rest) / coeffs[p]
    witness = tuple(x)
    if not system.satisfied_by(witness):
        raise AssertionError(f"internal error: back-substituted point {witness} violates the system")
    return FeasibilityResult(True, witness)


def in_conic_hull(target: Sequence[RationalLike], generators: Sequence[Sequence[RationalLike]]) -> bool:
    """True iff ``target`` is a nonnegative combination of ``generators``."""
    target = vector(target)
    gens = [vector(g) for g in generators]
    d = len(target)
    for g in gens:
        if len(g) != d:
            raise DimensionError("generator dimension differs from target")
    m = len(gens)
    if m == 0:
        return all(t == 0 for t in target)
    cons = [Constraint(tuple(g[i] for g in gens), Relation.EQ, target[i]) for i in range(d)]
    for j in range(m):
        cons.append(Constraint(tuple(Fraction(int(k == j)) for k in range(m)), Relation.GE, Fraction(0)))
    return check_feasible(LinearSystem(m, cons)).feasible
