"""Rational polyhedral cones, their extreme dual rays and sign profiles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import (
    Covector,
    DimensionError,
    QVector,
    SignProfile,
    dot,
    integer_entries,
    is_zero,
    kernel_basis,
    normalize_primitive,
    rank,
    row_reduce,
    sign,
    span_basis,
    vector,
)
from .feasibility import Constraint, LinearSystem, Relation, check_feasible, in_conic_hull


class ConeError(ValueError):
    """Raised for malformed or unsupported cone descriptions."""


@dataclass(frozen=True)
class ConeSpec:
    """A cone given by inequalities, generators, or an explicit dual-ray list.

    ``hrep`` rows ``a`` mean ``a(x) >= 0``; ``vrep`` vectors generate the cone;
    ``rays`` are user-supplied generators of the dual cone, which also
    describe ``K = {x : r(x) >= 0}``.
    """

    dim: int
    hrep: Optional[tuple] = None
    vrep: Optional[tuple] = None
    rays: Optional[tuple] = None

    def __post_init__(self):
        given = [name for name in ("hrep", "vrep", "rays") if getattr(self, name) is not None]
        if len(given) != 1:
            raise ConeError(f"exactly one of hrep/vrep/rays is required, got {given or 'none'}")
        if self.dim < 0:
            raise ConeError("cone dimension must be nonnegative")
        for name in given:
            rows = tuple(vector(r) for r in getattr(self, name))
            for r in rows:
                if len(r) != self.dim:
                    raise DimensionError(f"{name} entry {r} does not have dimension {self.dim}")
            if name == "rays" and any(is_zero(r) for r in rows):
                raise ConeError("explicit dual rays must be nonzero")
            object.__setattr__(self, name, rows)

    @classmethod
    def from_hrep(cls, rows, dim: Optional[int] = None) -> "ConeSpec":
        rows = [vector(r) for r in rows]
        return cls(dim if dim is not None else len(rows[0]), hrep=tuple(rows))

    @classmethod
    def from_vrep(cls, gens, dim: Optional[int] = None) -> "ConeSpec":
        gens = [vector(g) for g in gens]
        return cls(dim if dim is not None else len(gens[0]), vrep=tuple(gens))

    @classmethod
    def from_rays(cls, rays, dim: Optional[int] = None) -> "ConeSpec":
        rays = [vector(r) for r in rays]
        return cls(dim if dim is not None else len(rays[0]), rays=tuple(rays))

    def inequalities(self) -> list:
        """Rows ``a`` with ``K = {x : a(x) >= 0}``; not available for V-representations."""
        if self.vrep is not None:
            raise ConeError("a V-representation has no direct inequality list")
        rows = self.hrep if self.hrep is not None else self.rays
        return [r for r in rows if not is_zero(r)]

    def contains(self, x: Sequence[Fraction]) -> bool:
        """Membership decided from the given representation directly."""
        x = vector(x)
        if self.vrep is not None:
            return in_conic_hull(x, self.vrep)
        return all(dot(a, x) >= 0 for a in self.inequalities())

    def to_json(self) -> dict:
        from .exact import json_vector

        out: dict = {"dim": self.dim}
        for name in ("hrep", "vrep", "rays"):
            rows = getattr(self, name)
            if rows is not None:
                out[name] = [json_vector(r) for r in rows]
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "ConeSpec":
        if not isinstance(doc, dict) or "dim" not in doc:
            raise ConeError("cone description needs a 'dim' field")
        kwargs = {k: tuple(doc[k]) for k in ("hrep", "vrep", "rays") if k in doc}
        return cls(int(doc["dim"]), **kwargs)


@dataclass(frozen=True)
class DualRaySet:
    """Chosen primitive generators of the extreme rays of the dual cone."""

    rays: tuple
    lineality_basis: tuple
    dim: int

    def __len__(self) -> int:
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def scaled(self, factors: Sequence[Fraction]) -> "DualRaySet":
        """Same set with each ray multiplied by a positive factor (not re-normalized)."""
        if any(f <= 0 for f in factors):
            raise ValueError("rescaling factors must be positive")
        return DualRaySet(tuple(tuple(f * e for e in r) for f, r in zip(factors, self.rays)), self.lineality_basis, self.dim)


def lineality_space(cone: ConeSpec) -> list:
    """Basis of ``L_K = K ∩ (-K)``."""
    if cone.vrep is not None:
        gens = [g for g in cone.vrep if not is_zero(g)]
        two_sided = [g for g in gens if in_conic_hull(tuple(-e for e in g), gens)]
        return span_basis(two_sided, cone.dim)
    return kernel_basis(cone.inequalities(), cone.dim)


def _is_full_dimensional(rows: Sequence[Covector], d: int) -> bool:
    """``{x : r(x) > 0 for all r}`` is nonempty, i.e. the dual cone is pointed."""
    if not rows:
        return True
    system = LinearSystem(d, [Constraint(tuple(r), Relation.GT, Fraction(0)) for r in rows])
    return check_feasible(system).feasible


def _dedupe(rows: Sequence[Covector]) -> list:
    out = []
    for r in rows:
        r = normalize_primitive(r)
        if r not in out:
            out.append(r)
    return out


def _prune_to_extreme(rows: list) -> list:
    kept = list(rows)
    for r in list(rows):
        others = [s for s in kept if s != r]
        if in_conic_hull(r, others):
            kept.remove(r)
    return kept


def _lex_key(r: Covector):
    return integer_entries(r)


def double_description(constraints: Sequence[Covector], d: int) -> list:
    """Extreme rays of the pointed cone ``{y : c(y) >= 0 for all c}``.

    Seeded with the simplicial cone of the first ``d`` linearly independent
    constraints, then one constraint is added at a time. Adjacency of a
    positive/negative ray pair is decided by the algebraic rank test.
    """
    cons = [vector(c) for c in constraints if not is_zero(c)]
    seed: list = []
    for c in cons:
        if rank(seed + [c], d) > len(seed):
            seed.append(c)
        if len(seed) == d:
            break
    if len(seed) < d:
        raise ConeError("constraint system does not define a pointed cone")
    # Rays of {y : S y >= 0} for invertible S are the columns of S^{-1}.
    inverse_cols = []
    for k in range(d):
        aug = [list(row) + [Fraction(int(i == k))] for i, row in enumerate(seed)]
        rref, _ = row_reduce(aug, d + 1)
        inverse_cols.append(tuple(row[d] for row in rref))
    rays = [normalize_primitive(c) for c in inverse_cols]
    processed = list(seed)
    for c in cons:
        if c in seed:
            continue
        vals = [dot(c, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v >= 0]
        for p in pos:
            zp = {i for i, a in enumerate(processed) if dot(a, p) == 0}
            for n in neg:
                common = [processed[i] for i in zp if dot(processed[i], n) == 0]
                if rank(common, d) != d - 2:
                    continue
                w = tuple(dot(c, p) * ni - dot(c, n) * pi for pi, ni in zip(p, n))
                w = normalize_primitive(w)
                if w not in new:
                    new.append(w)
        rays = new
        processed.append(c)
    return rays


def extreme_dual_rays(cone: ConeSpec, keep_redundant: bool = False) -> DualRaySet:
    """Primitive extreme rays of ``K*`` in lexicographic order, plus ``L_K``.

    Explicit rays keep their supplied order after normalization. With
    ``keep_redundant`` they also skip extremality pruning, so redundant
    tests stay in as extra observations.
    """
    d = cone.dim
    lin = tuple(lineality_space(cone))
    if cone.vrep is not None:
        gens = [g for g in cone.vrep if not is_zero(g)]
        if rank(gens, d) < d:
            raise ConeError(
                "cone is not full-dimensional: its dual cone is not pointed, so the extreme "
                "dual rays do not generate it; supply a full-dimensional cone or explicit rays"
            )
        rays = sorted(_dedupe(double_description(gens, d)), key=_lex_key)
        return DualRaySet(tuple(rays), lin, d)

    rows = _dedupe(cone.inequalities())
    if not _is_full_dimensional(rows, d):
        raise ConeError(
            "cone is not full-dimensional after the lineality quotient (some inequalities are "
            "implicit equalities); extreme dual rays are not well defined for this input"
        )
    rays = rows if keep_redundant else _prune_to_extreme(rows)
    if cone.rays is None:
        rays = sorted(rays, key=_lex_key)
    return DualRaySet(tuple(rays), lin, d)


def _covectors(rays) -> tuple:
    if isinstance(rays, DualRaySet):
        return rays.rays
    if hasattr(rays, "covectors"):
        return tuple(rays.covectors)
    return tuple(rays)


def sigma(rays, x: Sequence[Fraction]) -> SignProfile:
    """Sign profile ``(sign r(x))`` over the rays, in ray order."""
    return tuple(sign(dot(r, x)) for r in _covectors(rays))


def member_of_cone(cone: ConeSpec, rays, x: Sequence[Fraction]) -> bool:
    del cone  # rays generate K* under the full-dimensionality precondition
    return all(s >= 0 for s in sigma(rays, x))


def extreme_face_sets(profile: SignProfile, rays) -> tuple:
    """(negative rays, active rays) of a profile."""
    rs = _covectors(rays)
    if len(profile) != len(rs):
        raise DimensionError("profile length differs from the ray count")
    negative = frozenset(r for r, s in zip(rs, profile) if s < 0)
    active = frozenset(r for r, s in zip(rs, profile) if s == 0)
    return negative, active


@dataclass(frozen=True)
class LinealityProjection:
    """Chart for ``V / L_K``: coordinates along a complement of the lineality space."""

    dim: int
    lineality_basis: tuple
    complement_basis: tuple

    def project(self, x: Sequence[Fraction]) -> QVector:
        basis = list(self.lineality_basis) + list(self.complement_basis)
        k = len(self.lineality_basis)
        # Solve x = sum c_i b_i; columns of the augmented matrix are the basis vectors.
        aug = [[b[i] for b in basis] + [x[i]] for i in range(self.dim)]
        rref, pivots = row_reduce(aug, len(basis) + 1)
        coeffs = [Fraction(0)] * len(basis)
        for row, pc in zip(rref, pivots):
            coeffs[pc] = row[-1]
        return tuple(coeffs[k:])

    def pull_back(self, r: Covector) -> Covector:
        """Restriction of a functional vanishing on ``L_K`` to the chart."""
        return tuple(dot(r, c) for c in self.complement_basis)


def quotient_by_lineality(cone: ConeSpec) -> tuple:
    """Return ``(projection, projected cone)`` with the projected cone pointed."""
    d = cone.dim
    lin = lineality_space(cone)
    complement = []
    for i in range(d):
        e = tuple(Fraction(int(j == i)) for j in range(d))
        if rank(lin + complement + [e], d) > len(lin) + len(complement):
            complement.append(e)
    proj = LinealityProjection(d, tuple(lin), tuple(complement))
    rays = extreme_dual_rays(cone).rays
    projected = ConeSpec(len(complement), hrep=tuple(proj.pull_back(r) for r in rays))
    return proj, projected
