"""Bounded-horizon conic quotients, separator-driven quotients and layer comparison.

All enumeration follows one canonical order: contexts ``x`` in
length-lexicographic order, then continuations ``z`` likewise, with
``|xz| <= H``. Residual vectors are computed once per (state, continuation)
by walking the continuation tree, then looked up for every context.
Arithmetic runs on an integer rescaling of the carrier (one common
denominator for all increments and offsets, one per ray), which leaves
every sign and every equality unchanged; witness values are mapped back
to exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

from .carrier import WeightedCarrier, Word, residual, words_up_to
from .cones import _covectors
from .exact import SignProfile, dot, sign


# -- enumeration ------------------------------------------------------------

def word_pair_domain(alphabet: Sequence[str], horizon: int) -> list:
    """All ``(x, z)`` with ``|xz| <= horizon`` in canonical order."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    return [(x, z) for x in words_up_to(alphabet, horizon) for z in words_up_to(alphabet, horizon - len(x))]


class IntegerView:
    """Integer-scaled copy of a carrier and a ray list.

    Increments and offsets are multiplied by the common denominator
    ``scale``; each ray by its own denominator ``ray_scales[i]``.
    """

    def __init__(self, carrier: WeightedCarrier, rays):
        self.carrier = carrier
        entries = [e for v in carrier.g.values() for e in v] + [e for v in carrier.tau.values() for e in v]
        self.scale = lcm(1, *(e.denominator for e in entries))
        L = self.scale
        self.g = {k: tuple(int(e * L) for e in v) for k, v in carrier.g.items()}
        self.tau = {p: tuple(int(e * L) for e in v) for p, v in carrier.tau.items()}
        self.rays = []
        self.ray_scales = []
        for r in _covectors(rays) if rays is not None else ():
            m = lcm(1, *(e.denominator for e in r))
            self.rays.append(tuple(int(e * m) for e in r))
            self.ray_scales.append(m)

    def exact_value(self, ray_index: int, value: int) -> Fraction:
        return Fraction(value, self.scale * self.ray_scales[ray_index])

    def residual_tables(self, horizon: int) -> dict:
        """``{state: {z: integer residual}}`` for ``|z| <= horizon``."""
        c = self.carrier
        d = c.dim
        tables = {}
        for q in c.states:
            table = {}
            tq = self.tau[q]
            # (word, accumulated increments, end state), expanded in length-lex order
            frontier = [((), (0,) * d, q)]
            table[()] = (0,) * d
            for _ in range(horizon):
                nxt = []
                for w, acc, end in frontier:
                    for a in c.alphabet:
                        inc = self.g[end, a]
                        acc2 = tuple(u + v for u, v in zip(acc, inc))
                        end2 = c.delta[end, a]
                        w2 = w + (a,)
                        t = self.tau[end2]
                        table[w2] = tuple(u + v - s for u, v, s in zip(acc2, t, tq))
                        nxt.append((w2, acc2, end2))
                frontier = nxt
            tables[q] = table
        return tables

    def context_targets(self, p: str, horizon: int) -> dict:
        """``{x: δ(p, x)}`` for ``|x| <= horizon``."""
        out = {(): p}
        for x in words_up_to(self.carrier.alphabet, horizon):
            if x:
                out[x] = self.carrier.delta[out[x[:-1]], x[-1]]
        return out


# -- data types -------------------------------------------------------------

@dataclass(frozen=True)
class Partition:
    """Blocks of states, each block and the block list in canonical order."""

    blocks: tuple

    @classmethod
    def from_keys(cls, states: Sequence[str], key: Callable) -> "Partition":
        groups: dict = {}
        for s in states:
            groups.setdefault(key(s), []).append(s)
        return cls(tuple(tuple(b) for b in groups.values()))

    @classmethod
    def trivial(cls, states: Sequence[str]) -> "Partition":
        return cls((tuple(states),))

    @classmethod
    def discrete(cls, states: Sequence[str]) -> "Partition":
        return cls(tuple((s,) for s in states))

    @property
    def block_of(self) -> dict:
        return {s: i for i, b in enumerate(self.blocks) for s in b}

    def __len__(self) -> int:
        return len(self.blocks)

    def states(self) -> list:
        return [s for b in self.blocks for s in b]

    def same_block(self, p: str, q: str) -> bool:
        bo = self.block_of
        return bo[p] == bo[q]

    def refines(self, other: "Partition") -> bool:
        """Every block of ``self`` lies inside one block of ``other``."""
        bo = other.block_of
        return all(len({bo[s] for s in b}) == 1 for b in self.blocks)

    def meet(self, other: "Partition", order: Optional[Sequence[str]] = None) -> "Partition":
        a, b = self.block_of, other.block_of
        states = order if order is not None else sorted(a)
        return Partition.from_keys(states, lambda s: (a[s], b[s]))

    def as_sets(self) -> frozenset:
        return frozenset(frozenset(b) for b in self.blocks)

    def to_json(self) -> list:
        return [list(b) for b in self.blocks]


@dataclass(frozen=True)
class NegativeWitness:
    state: str
    context: Word
    continuation: Word
    ray_index: int
    value: Fraction

    @property
    def length(self) -> int:
        return len(self.context) + len(self.continuation)

    def verify(self, carrier: WeightedCarrier, rays) -> bool:
        r = _covectors(rays)[self.ray_index]
        v = dot(r, residual(carrier, self.state, self.context, self.continuation))
        return v == self.value and v < 0

    def to_json(self) -> dict:
        return {
            "state": self.state,
            "x": list(self.context),
            "z": list(self.continuation),
            "ray": self.ray_index,
            "value": str(self.value),
        }


@dataclass(frozen=True)
class Signature:
    """Cell-valued row of one state: ``((x, z), profile)`` entries in canonical order."""

    state: str
    entries: tuple

    def __getitem__(self, key) -> SignProfile:
        x, z = (tuple(key[0]), tuple(key[1]))
        for k, prof in self.entries:
            if k == (x, z):
                return prof
        raise KeyError(key)

    def profiles(self) -> tuple:
        return tuple(p for _, p in self.entries)


@dataclass
class QuotientResult:
    raw_partition: Partition
    stable_partition: Partition
    witnesses: list
    word_pairs: int
    ray_evals: int
    transitions: dict = field(default_factory=dict)
    signatures: dict = field(default_factory=dict)
    unresolved_cells: int = 0
    splits: list = field(default_factory=list)

    @property
    def blocks(self) -> int:
        return len(self.stable_partition)

    @property
    def first_witness_length(self) -> Optional[int]:
        return min((w.length for w in self.witnesses), default=None)

    @property
    def unique_witness_states(self) -> int:
        return len({w.state for w in self.witnesses})

    def to_json(self, alphabet: Sequence[str] = ()) -> dict:
        bo = self.stable_partition.block_of
        return {
            "raw_partition": self.raw_partition.to_json(),
            "stable_partition": self.stable_partition.to_json(),
            "blocks_raw": len(self.raw_partition),
            "blocks_stable": len(self.stable_partition),
            "witnesses": [w.to_json() for w in self.witnesses],
            "counters": {"word_pairs": self.word_pairs, "ray_evals": self.ray_evals},
            "quotient_transitions": [
                {"block": b, "letter": a, "to": t} for (b, a), t in sorted(self.transitions.items())
            ],
            "splits": self.splits,
        }


# -- bounded construction ---------------------------------------------------

def stabilize(partition: Partition, carrier: WeightedCarrier) -> Partition:
    """Coarsest refinement of ``partition`` closed under letter successors."""
    current = partition
    while True:
        bo = current.block_of
        nxt = Partition.from_keys(
            carrier.states, lambda p: (bo[p],) + tuple(bo[carrier.delta[p, a]] for a in carrier.alphabet)
        )
        if len(nxt) == len(current):
            return nxt
        current = nxt


def quotient_transitions(partition: Partition, carrier: WeightedCarrier) -> Optional[dict]:
    """``{(block, letter): block}``, or None if the partition is not right-stable."""
    bo = partition.block_of
    out = {}
    for i, b in enumerate(partition.blocks):
        for a in carrier.alphabet:
            targets = {bo[carrier.delta[p, a]] for p in b}
            if len(targets) != 1:
                return None
            out[i, a] = targets.pop()
    return out


def bounded_signature(carrier: WeightedCarrier, rays, p: str, horizon: int) -> Signature:
    view = IntegerView(carrier, rays)
    tables = view.residual_tables(horizon)
    targets = view.context_targets(p, horizon)
    entries = []
    for x, z in word_pair_domain(carrier.alphabet, horizon):
        res = tables[targets[x]][z]
        entries.append(((x, z), tuple(sign(sum(a * b for a, b in zip(r, res))) for r in view.rays)))
    return Signature(p, tuple(entries))


def bounded_conic_quotient(
    carrier: WeightedCarrier,
    rays,
    horizon: int,
    first_witness_only: bool = False,
    keep_signatures: bool = False,
) -> QuotientResult:
    """Partition states by equal sign rows over ``|xz| <= horizon``, then stabilize."""
    view = IntegerView(carrier, rays)
    tables = view.residual_tables(horizon)
    domain = word_pair_domain(carrier.alphabet, horizon)
    ray_list = view.rays
    evals = 0
    witnesses = []
    nonneg_cells = set()
    rows = {}
    signatures = {}
    for p in carrier.states:
        targets = view.context_targets(p, horizon)
        row = []
        for x, z in domain:
            res = tables[targets[x]][z]
            prof = []
            for i, r in enumerate(ray_list):
                v = sum(a * b for a, b in zip(r, res))
                evals += 1
                prof.append((v > 0) - (v < 0))
                if v < 0 and not (first_witness_only and witnesses):
                    witnesses.append(NegativeWitness(p, x, z, i, view.exact_value(i, v)))
            prof = tuple(prof)
            if z and -1 not in prof:
                nonneg_cells.add(prof)
            row.append(prof)
        rows[p] = tuple(row)
        if keep_signatures:
            signatures[p] = Signature(p, tuple(zip(domain, row)))
    raw = Partition.from_keys(carrier.states, lambda p: rows[p])
    stable = stabilize(raw, carrier)
    return QuotientResult(
        raw_partition=raw,
        stable_partition=stable,
        witnesses=witnesses,
        word_pairs=len(domain),
        ray_evals=evals,
        transitions=quotient_transitions(stable, carrier) or {},
        signatures=signatures,
        unresolved_cells=len(nonneg_cells),
    )


def bounded_numerical_quotient(carrier: WeightedCarrier, rays, horizon: int) -> Partition:
    """States grouped by exact ray values of every residual in the horizon."""
    view = IntegerView(carrier, rays)
    tables = view.residual_tables(horizon)
    domain = word_pair_domain(carrier.alphabet, horizon)

    def key(p):
        targets = view.context_targets(p, horizon)
        return tuple(
            tuple(sum(a * b for a, b in zip(r, tables[targets[x]][z])) for r in view.rays) for x, z in domain
        )

    return Partition.from_keys(carrier.states, key)


def bounded_vector_quotient(carrier: WeightedCarrier, horizon: int) -> Partition:
    """States grouped by exact vector residuals in the horizon."""
    view = IntegerView(carrier, None)
    tables = view.residual_tables(horizon)
    domain = word_pair_domain(carrier.alphabet, horizon)

    def key(p):
        targets = view.context_targets(p, horizon)
        return tuple(tables[targets[x]][z] for x, z in domain)

    return Partition.from_keys(carrier.states, key)


@dataclass
class LayerReport:
    vector: Partition
    numerical: Partition
    conic: Partition
    chain_holds: bool
    numerical_strict_pairs: list  # same conic block, different numerical block
    vector_strict_pairs: list  # same numerical block, different vector block

    def to_json(self) -> dict:
        return {
            "vector_blocks": len(self.vector),
            "numerical_blocks": len(self.numerical),
            "conic_blocks": len(self.conic),
            "chain_holds": self.chain_holds,
            "numerical_strict_pairs": [list(p) for p in self.numerical_strict_pairs],
            "vector_strict_pairs": [list(p) for p in self.vector_strict_pairs],
        }


def compare_layers(carrier: WeightedCarrier, rays, horizon: int) -> LayerReport:
    """Check vector ⊆ numerical ⊆ conic (raw bounded partitions) and report strictness."""
    vec = bounded_vector_quotient(carrier, horizon)
    num = bounded_numerical_quotient(carrier, rays, horizon)
    con = bounded_conic_quotient(carrier, rays, horizon).raw_partition

    def strict_pairs(fine, coarse):
        fb, cb = fine.block_of, coarse.block_of
        return [
            (p, q)
            for p, q in itertools.combinations(carrier.states, 2)
            if cb[p] == cb[q] and fb[p] != fb[q]
        ]

    return LayerReport(
        vector=vec,
        numerical=num,
        conic=con,
        chain_holds=vec.refines(num) and num.refines(con),
        numerical_strict_pairs=strict_pairs(num, con),
        vector_strict_pairs=strict_pairs(vec, num),
    )


# -- separator-driven construction -----------------------------------------

@dataclass(frozen=True)
class SeparationWitness:
    ray_index: int
    continuation: Word

    def to_json(self) -> dict:
        return {"ray": self.ray_index, "z": list(self.continuation)}


class BoundedSeparator:
    """Searches continuations up to a length bound for a differing ray sign.

    Sound by construction; complete only for witnesses of length <= horizon.
    """

    def __init__(self, horizon: int):
        if horizon < 0:
            raise ValueError("horizon must be >= 0")
        self.horizon = horizon
        self._cache: dict = {}

    def __call__(self, carrier: WeightedCarrier, rays, p: str, q: str) -> Optional[SeparationWitness]:
        key = id(carrier), id(rays)
        if key not in self._cache:
            view = IntegerView(carrier, rays)
            # keep references so the ids in the key stay unique
            self._cache[key] = (view, view.residual_tables(self.horizon), carrier, rays)
        view, tables = self._cache[key][:2]
        for z in words_up_to(carrier.alphabet, self.horizon):
            rp, rq = tables[p][z], tables[q][z]
            for i, r in enumerate(view.rays):
                if sign(sum(a * b for a, b in zip(r, rp))) != sign(sum(a * b for a, b in zip(r, rq))):
                    return SeparationWitness(i, z)
        return None


def bounded_separator(horizon: int) -> BoundedSeparator:
    return BoundedSeparator(horizon)


def exact_quotient_with_separator(carrier: WeightedCarrier, rays, separator) -> QuotientResult:
    """Split by separator witnesses and successor consistency until nothing changes.

    Each split is logged with its justification. With a sound and complete
    separator the result is the conic congruence on the reachable states.
    """
    ray_list = _covectors(rays)
    blocks = [list(carrier.states)]
    splits = []
    verdicts: dict = {}
    while True:
        split_done = False
        for bi, block in enumerate(blocks):
            for p, q in itertools.combinations(block, 2):
                if (p, q) not in verdicts:
                    verdicts[p, q] = separator(carrier, rays, p, q)
                w = verdicts[p, q]
                if w is None:
                    continue
                r = ray_list[w.ray_index]
                groups: dict = {}
                for s in block:
                    groups.setdefault(sign(dot(r, residual(carrier, s, (), w.continuation))), []).append(s)
                blocks[bi : bi + 1] = list(groups.values())
                splits.append(
                    {"kind": "future", "pair": [p, q], "witness": w.to_json(), "parts": [list(g) for g in groups.values()]}
                )
                split_done = True
                break
            if split_done:
                break
        if split_done:
            continue
        current = Partition.from_keys(carrier.states, lambda s: next(i for i, b in enumerate(blocks) if s in b))
        bo = current.block_of
        for bi, block in enumerate(blocks):
            for a in carrier.alphabet:
                groups = {}
                for s in block:
                    groups.setdefault(bo[carrier.delta[s, a]], []).append(s)
                if len(groups) > 1:
                    blocks[bi : bi + 1] = list(groups.values())
                    splits.append({"kind": "successor", "letter": a, "parts": [list(g) for g in groups.values()]})
                    split_done = True
                    break
            if split_done:
                break
        if not split_done:
            break
    final = Partition.from_keys(carrier.states, lambda s: next(i for i, b in enumerate(blocks) if s in b))
    return QuotientResult(
        raw_partition=final,
        stable_partition=final,
        witnesses=[],
        word_pairs=0,
        ray_evals=0,
        transitions=quotient_transitions(final, carrier) or {},
        splits=splits,
    )
