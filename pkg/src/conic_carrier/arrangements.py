"""Finite covector families as central sign arrangements.

Refinement between two families is decided cell by cell: for each sign
vector of the finer family whose cell is nonempty, every covector of the
coarser family must have a constant sign on that cell. Each cell test is an
exact feasibility problem with mixed strict and non-strict constraints.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import Covector, DimensionError, QVector, dot, integer_entries, is_zero, normalize_primitive, sign, vector
from .feasibility import Constraint, LinearSystem, Relation, check_feasible

MAX_ENUMERATION = 12


class FamilyTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class CovectorFamily:
    dim: int
    covectors: tuple

    def __post_init__(self):
        seen = []
        for r in self.covectors:
            r = vector(r)
            if len(r) != self.dim:
                raise DimensionError(f"covector {r} is not of dimension {self.dim}")
            if is_zero(r):
                raise ValueError("covector families may not contain the zero covector")
            r = normalize_primitive(r)
            if r not in seen:
                seen.append(r)
        object.__setattr__(self, "covectors", tuple(seen))

    @classmethod
    def of(cls, covectors: Sequence, dim: Optional[int] = None) -> "CovectorFamily":
        covectors = [vector(c) for c in covectors]
        if dim is None:
            if not covectors:
                raise ValueError("dimension needed for an empty family")
            dim = len(covectors[0])
        return cls(dim, tuple(covectors))

    def __len__(self) -> int:
        return len(self.covectors)

    def signs(self, x: Sequence[Fraction]) -> tuple:
        return tuple(sign(dot(r, x)) for r in self.covectors)

    def to_json(self) -> dict:
        return {"dim": self.dim, "covectors": [list(integer_entries(r)) for r in self.covectors]}

    @classmethod
    def from_json(cls, doc: dict) -> "CovectorFamily":
        if not isinstance(doc, dict) or "dim" not in doc or "covectors" not in doc:
            raise ValueError("covector family needs 'dim' and 'covectors'")
        return cls(int(doc["dim"]), tuple(vector(c) for c in doc["covectors"]))


def _sign_constraint(r: Covector, s: int) -> Constraint:
    if s > 0:
        return Constraint(tuple(r), Relation.GT, Fraction(0))
    if s < 0:
        return Constraint(tuple(-e for e in r), Relation.GT, Fraction(0))
    return Constraint(tuple(r), Relation.EQ, Fraction(0))


def cell_system(family: CovectorFamily, eta: Sequence[int]) -> list:
    return [_sign_constraint(r, s) for r, s in zip(family.covectors, eta)]


def cell_point(family: CovectorFamily, eta: Sequence[int], extra: Sequence[Constraint] = ()) -> Optional[QVector]:
    """A point of the ``eta``-cell satisfying ``extra``, or None if there is none."""
    res = check_feasible(LinearSystem(family.dim, cell_system(family, eta) + list(extra)))
    return res.witness if res.feasible else None


@dataclass(frozen=True)
class SignCell:
    sign_vector: tuple
    sample: QVector


def enumerate_realizable_cells(family: CovectorFamily, samples: Optional[Sequence] = None):
    """Nonempty cells of the arrangement, in ``product((-1, 0, 1))`` order.

    With ``samples``, also returns ``{sign vector: [sample indices]}``.
    """
    if len(family) > MAX_ENUMERATION:
        raise FamilyTooLarge(f"{len(family)} covectors exceed the enumeration guard of {MAX_ENUMERATION}")
    cells = []
    for eta in itertools.product((-1, 0, 1), repeat=len(family)):
        pt = cell_point(family, eta)
        if pt is not None:
            cells.append(SignCell(eta, pt))
    if samples is None:
        return cells
    where: dict = {}
    for i, x in enumerate(samples):
        where.setdefault(family.signs(vector(x)), []).append(i)
    return cells, where


def split_witness(coarse: CovectorFamily, fine: CovectorFamily) -> Optional[tuple]:
    """Two points with equal ``fine`` signs but different ``coarse`` signs, if any."""
    if coarse.dim != fine.dim:
        raise DimensionError("families live in different dimensions")
    if len(fine) > MAX_ENUMERATION:
        raise FamilyTooLarge(f"{len(fine)} covectors exceed the enumeration guard of {MAX_ENUMERATION}")
    for eta in itertools.product((-1, 0, 1), repeat=len(fine)):
        if cell_point(fine, eta) is None:
            continue
        for s in coarse.covectors:
            points = {}
            for t in (-1, 0, 1):
                pt = cell_point(fine, eta, [_sign_constraint(s, t)])
                if pt is not None:
                    points[t] = pt
            if len(points) >= 2:
                a, b = sorted(points)[:2]
                return points[a], points[b]
    return None


def refines(coarse: CovectorFamily, fine: CovectorFamily) -> bool:
    """True iff equal ``fine`` signs always force equal ``coarse`` signs."""
    return split_witness(coarse, fine) is None


class Relation4(enum.Enum):
    REFINES = "REFINES"
    EQUAL = "EQUAL"
    REFINED_BY = "REFINED_BY"
    INCOMPARABLE = "INCOMPARABLE"


@dataclass(frozen=True)
class RefinementVerdict:
    """Outcome of comparing arrangements A and B.

    ``REFINES`` means A is finer than B. ``a_not_finer`` is a pair with equal
    A-signs but different B-signs; ``b_not_finer`` the other way round.
    """

    relation: Relation4
    a_not_finer: Optional[tuple] = None
    b_not_finer: Optional[tuple] = None

    def to_json(self) -> dict:
        def pair(p):
            return None if p is None else [[str(e) for e in x] for x in p]

        return {"relation": self.relation.value, "a_not_finer": pair(self.a_not_finer), "b_not_finer": pair(self.b_not_finer)}


def compare_arrangements(a: CovectorFamily, b: CovectorFamily) -> RefinementVerdict:
    wa = split_witness(coarse=b, fine=a)
    wb = split_witness(coarse=a, fine=b)
    if wa is None and wb is None:
        rel = Relation4.EQUAL
    elif wa is None:
        rel = Relation4.REFINES
    elif wb is None:
        rel = Relation4.REFINED_BY
    else:
        rel = Relation4.INCOMPARABLE
    return RefinementVerdict(rel, wa, wb)


def union_family(s: CovectorFamily, t: CovectorFamily) -> CovectorFamily:
    if s.dim != t.dim:
        raise DimensionError("families live in different dimensions")
    return CovectorFamily(s.dim, s.covectors + t.covectors)


def bounded_observable(candidates: CovectorFamily, partition, carrier, horizon: int) -> CovectorFamily:
    """Candidates whose residual signs agree across every block for ``|xz| <= horizon``."""
    from .quotient import IntegerView, word_pair_domain

    view = IntegerView(carrier, candidates.covectors)
    tables = view.residual_tables(horizon)
    domain = word_pair_domain(carrier.alphabet, horizon)
    targets = {p: view.context_targets(p, horizon) for p in carrier.states}
    keep = []
    for i, r in enumerate(view.rays):
        ok = True
        for block in partition.blocks:
            ref = None
            for p in block:
                row = tuple(
                    sign(sum(a * b for a, b in zip(r, tables[targets[p][x]][z]))) for x, z in domain
                )
                if ref is None:
                    ref = row
                elif row != ref:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            keep.append(candidates.covectors[i])
    return CovectorFamily(candidates.dim, tuple(keep))
