"""Deterministic vector-weighted carriers and their residual futures."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .cones import ConeError, ConeSpec, sigma
from .exact import QVector, SignProfile, add, json_vector, span_basis, sub, to_rational, vector, zero

Word = tuple  # tuple of letters


class CarrierError(ValueError):
    pass


class CarrierParseError(CarrierError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"line {line}, column {column}: {message}" if line else message)
        self.line = line
        self.column = column


class CarrierValidationError(CarrierError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("invalid carrier:\n  " + "\n  ".join(self.errors))


def as_word(w) -> Word:
    """Accept a tuple/list of letters, or a string of one-character letters."""
    if isinstance(w, str):
        return tuple(w)
    return tuple(w)


def render_word(w: Word) -> str:
    if not w:
        return "ε"
    if all(len(a) == 1 for a in w):
        return "".join(w)
    return ".".join(w)


def words_up_to(alphabet: Sequence[str], n: int) -> Iterator[Word]:
    """All words of length <= n in length-lexicographic order."""
    for k in range(n + 1):
        yield from itertools.product(alphabet, repeat=k)


@dataclass(frozen=True)
class WeightedCarrier:
    """A complete deterministic automaton with vector edge increments.

    ``initial`` is a tuple of root states; every state must be reachable from
    some root. A single root is the usual case. States and letters are kept
    sorted, which is the canonical order used everywhere downstream.
    """

    dim: int
    alphabet: tuple
    states: tuple
    initial: tuple
    delta: dict
    g: dict
    tau: dict = field(default_factory=dict)
    cone: Optional[ConeSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(self.alphabet)))
        object.__setattr__(self, "states", tuple(sorted(self.states)))
        init = (self.initial,) if isinstance(self.initial, str) else tuple(sorted(set(self.initial)))
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "g", {k: vector(v) for k, v in self.g.items()})
        tau = {p: vector(v) for p, v in self.tau.items()}
        for p in self.states:
            tau.setdefault(p, zero(self.dim))
        object.__setattr__(self, "tau", tau)
        errors = self.validation_errors()
        if errors:
            raise CarrierValidationError(errors)

    def validation_errors(self) -> list:
        errors = []
        if self.dim < 1:
            errors.append(f"dimension must be >= 1, got {self.dim}")
        if not self.states:
            errors.append("carrier has no states")
        if not self.alphabet:
            errors.append("alphabet is empty")
        if len(set(self.states)) != len(self.states):
            errors.append("duplicate state ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            errors.append("duplicate letters")
        state_set = set(self.states)
        if not self.initial:
            errors.append("no initial state")
        for s in self.initial:
            if s not in state_set:
                errors.append(f"initial state {s!r} is not a declared state")
        for p in self.states:
            for a in self.alphabet:
                if (p, a) not in self.delta:
                    errors.append(f"missing transition ({p!r}, {a!r}): carrier must be complete")
                elif self.delta[p, a] not in state_set:
                    errors.append(f"transition ({p!r}, {a!r}) targets unknown state {self.delta[p, a]!r}")
                if (p, a) not in self.g:
                    errors.append(f"missing increment for ({p!r}, {a!r})")
                elif len(self.g[p, a]) != self.dim:
                    errors.append(f"increment for ({p!r}, {a!r}) has dimension {len(self.g[p, a])}, expected {self.dim}")
        for (p, a) in self.delta:
            if p not in state_set or a not in self.alphabet:
                errors.append(f"transition ({p!r}, {a!r}) uses an undeclared state or letter")
        for p, v in self.tau.items():
            if p not in state_set:
                errors.append(f"terminal offset for undeclared state {p!r}")
            elif len(v) != self.dim:
                errors.append(f"terminal offset of {p!r} has dimension {len(v)}, expected {self.dim}")
        if self.cone is not None and self.cone.dim != self.dim:
            errors.append(f"cone dimension {self.cone.dim} differs from carrier dimension {self.dim}")
        if not errors:
            seen = set(self.initial)
            stack = list(self.initial)
            while stack:
                p = stack.pop()
                for a in self.alphabet:
                    q = self.delta[p, a]
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            for p in self.states:
                if p not in seen:
                    errors.append(f"state {p!r} is unreachable from the initial state(s)")
        return errors

    # -- evaluation -------------------------------------------------------

    def run(self, p: str, w: Iterable[str]) -> str:
        for a in w:
            if a not in self.alphabet:
                raise CarrierError(f"unknown letter {a!r}")
            p = self.delta[p, a]
        return p

    def path_sum(self, p: str, w: Iterable[str]) -> tuple:
        """(sum of increments along ``w`` from ``p``, end state)."""
        acc = zero(self.dim)
        for a in w:
            if a not in self.alphabet:
                raise CarrierError(f"unknown letter {a!r}")
            acc = add(acc, self.g[p, a])
            p = self.delta[p, a]
        return acc, p

    def with_increments(self, g: dict) -> "WeightedCarrier":
        return WeightedCarrier(self.dim, self.alphabet, self.states, self.initial, dict(self.delta), g, dict(self.tau), self.cone)


def eval_from(carrier: WeightedCarrier, p: str, w) -> QVector:
    """``h_p(w)``: increments along ``w`` from ``p`` plus the terminal offset at the end."""
    acc, end = carrier.path_sum(p, as_word(w))
    return add(acc, carrier.tau[end])


def residual(carrier: WeightedCarrier, p: str, x, z) -> QVector:
    """``h_{p_x}(z) - h_{p_x}(ε)`` where ``p_x`` is ``p`` advanced by ``x``."""
    px = carrier.run(p, as_word(x))
    return sub(eval_from(carrier, px, z), carrier.tau[px])


def facial_language(carrier: WeightedCarrier, rays, p: str, profile: SignProfile, max_len: int) -> list:
    """Continuations ``z`` (|z| <= max_len) whose residual from ``p`` has the given profile."""
    profile = tuple(profile)
    return [z for z in words_up_to(carrier.alphabet, max_len) if sigma(rays, residual(carrier, p, (), z)) == profile]


def residual_span_basis(carrier: WeightedCarrier, horizon: int) -> list:
    """Basis of the span of all residuals with ``|xz| <= horizon``.

    ``residual(p, x, z) = residual(p_x, ε, z)`` and every state is reachable,
    so it suffices to range over states and ``|z| <= horizon``.
    """
    vecs = []
    for p in carrier.states:
        for z in words_up_to(carrier.alphabet, horizon):
            vecs.append(residual(carrier, p, (), z))
    return span_basis(vecs, carrier.dim)


def restricted_configuration(rays, span: Sequence[QVector]) -> list:
    """Indices of rays whose restriction to the span is nonzero."""
    from .cones import _covectors
    from .exact import dot

    return [i for i, r in enumerate(_covectors(rays)) if any(dot(r, v) != 0 for v in span)]


# -- file format ------------------------------------------------------------

def carrier_to_json(carrier: WeightedCarrier) -> dict:
    doc: dict = {
        "dim": carrier.dim,
        "alphabet": list(carrier.alphabet),
        "states": list(carrier.states),
        "initial": carrier.initial[0] if len(carrier.initial) == 1 else list(carrier.initial),
        "tau": {p: json_vector(carrier.tau[p]) for p in carrier.states},
        "edges": [
            {"from": p, "letter": a, "to": carrier.delta[p, a], "g": json_vector(carrier.g[p, a])}
            for p in carrier.states
            for a in carrier.alphabet
        ],
    }
    if carrier.cone is not None:
        doc["cone"] = carrier.cone.to_json()
    return doc


def save_carrier(carrier: WeightedCarrier) -> str:
    doc = carrier_to_json(carrier)
    lines = ["{"]
    items = []
    for key in ("dim", "alphabet", "states", "initial"):
        items.append(f'  "{key}": {json.dumps(doc[key])}')
    tau = ",\n".join(f"    {json.dumps(p)}: {json.dumps(v)}" for p, v in doc["tau"].items())
    items.append('  "tau": {\n' + tau + "\n  }")
    edges = ",\n".join("    " + json.dumps(e) for e in doc["edges"])
    items.append('  "edges": [\n' + edges + "\n  ]")
    if "cone" in doc:
        items.append(f'  "cone": {json.dumps(doc["cone"])}')
    lines.append(",\n".join(items))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _rational_list(value, where: str, errors: list) -> Optional[tuple]:
    if not isinstance(value, list):
        errors.append(f"{where}: expected a list of rationals")
        return None
    try:
        return tuple(to_rational(v) for v in value)
    except (TypeError, ValueError) as exc:
        errors.append(f"{where}: {exc}")
        return None


def carrier_from_json(doc) -> WeightedCarrier:
    errors: list = []
    if not isinstance(doc, dict):
        raise CarrierValidationError(["top level must be a JSON object"])
    for key in ("dim", "alphabet", "states", "initial", "edges"):
        if key not in doc:
            errors.append(f"missing field {key!r}")
    if errors:
        raise CarrierValidationError(errors)
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise CarrierValidationError([f"'dim' must be an integer, got {dim!r}"])
    delta: dict = {}
    g: dict = {}
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, dict) or not {"from", "letter", "to", "g"} <= set(e):
            errors.append(f"edge #{i}: needs from/letter/to/g")
            continue
        key = (e["from"], e["letter"])
        if key in delta:
            errors.append(f"edge #{i}: duplicate transition {key!r} (carrier must be deterministic)")
            continue
        vec = _rational_list(e["g"], f"edge #{i} increment", errors)
        delta[key] = e["to"]
        if vec is not None:
            g[key] = vec
    tau: dict = {}
    for p, v in (doc.get("tau") or {}).items():
        vec = _rational_list(v, f"terminal offset of {p!r}", errors)
        if vec is not None:
            tau[p] = vec
    cone = None
    if "cone" in doc:
        try:
            cone = ConeSpec.from_json(doc["cone"])
        except (ConeError, ValueError, TypeError) as exc:
            errors.append(f"cone: {exc}")
    if errors:
        raise CarrierValidationError(errors)
    return WeightedCarrier(dim, tuple(doc["alphabet"]), tuple(doc["states"]), doc["initial"], delta, g, tau, cone)


def load_carrier(text: str) -> WeightedCarrier:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CarrierParseError(exc.msg, exc.lineno, exc.colno) from None
    return carrier_from_json(doc)
