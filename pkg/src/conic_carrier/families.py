"""Example carriers and deterministic generators for the evaluation families.

Generated families are driven by splitmix64, so a (family, seed) pair maps to
the same carrier on every platform. Their internal structure is a local
convention: successor choice and integer increments in [-4, 4], with
rejection sampling to meet each family's cell property.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Callable, Optional

from .carrier import WeightedCarrier
from .cones import ConeSpec, extreme_dual_rays

MASK64 = (1 << 64) - 1
DEFAULT_SEED = 1729

WEDGE = ConeSpec.from_hrep([[-1, 1], [1, 1]])
# Six rays ±e_i + e_4 in dimension 4; all positive on e_4, so the dual cone is pointed.
HIGH_DIM_RAYS = [[1, 0, 0, 1], [-1, 0, 0, 1], [0, 1, 0, 1], [0, -1, 0, 1], [0, 0, 1, 1], [0, 0, -1, 1]]


class SplitMix64:
    """The splitmix64 generator with its standard constants."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection, so no modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)


def _family_seed(name: str, seed: int) -> int:
    salt = int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "big")
    return (seed ^ salt) & MASK64


@dataclass(frozen=True)
class FamilySpec:
    name: str
    states: int
    alphabet_size: int
    dimension: int
    cone: ConeSpec
    seed: Optional[int] = None

    @property
    def rays(self):
        return extreme_dual_rays(self.cone)


def _state_names(n: int) -> list:
    width = len(str(n - 1))
    return [f"s{i:0{width}d}" for i in range(n)]


def _letters(k: int) -> list:
    return [chr(ord("a") + i) for i in range(k)]


def _wedge_signs(v):
    x1, x2 = v
    return x2 - x1, x1 + x2


def _sample(rng: SplitMix64, d: int, accept: Callable) -> tuple:
    while True:
        v = tuple(rng.between(-4, 4) for _ in range(d))
        if accept(v):
            return v


def _skeleton(rng: SplitMix64, n: int, k: int) -> dict:
    """Letter ``a`` walks a Hamiltonian cycle (reachability); other letters go anywhere."""
    names = _state_names(n)
    letters = _letters(k)
    delta = {}
    for i, p in enumerate(names):
        delta[p, letters[0]] = names[(i + 1) % n]
        for a in letters[1:]:
            delta[p, a] = names[rng.below(n)]
    return delta


def _build(spec: FamilySpec, delta: dict, g: dict) -> WeightedCarrier:
    names = _state_names(spec.states)
    return WeightedCarrier(spec.dimension, tuple(_letters(spec.alphabet_size)), tuple(names), names[0], delta, g, {}, spec.cone)


def _resource_monitor(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    # a: consume within budget (open positive cell); b: risk spike (r- < 0);
    # c: rebalance (anything in range); d: hold on a face (one ray tight).
    delta = _skeleton(rng, spec.states, spec.alphabet_size)
    g = {}
    for (p, a) in sorted(delta):
        if a == "a":
            g[p, a] = _sample(rng, 2, lambda v: min(_wedge_signs(v)) > 0)
        elif a == "b":
            g[p, a] = _sample(rng, 2, lambda v: _wedge_signs(v)[0] < 0 < _wedge_signs(v)[1])
        elif a == "c":
            g[p, a] = _sample(rng, 2, lambda v: v != (0, 0))
        else:
            g[p, a] = _sample(rng, 2, lambda v: 0 in _wedge_signs(v) and v != (0, 0))
    return _build(spec, delta, g)


def _random_grid(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    """Torus grid with four moves; redrawn until every state has a negative
    outgoing edge and both scalarizations carry a negative cycle."""
    from .scalar import detect_negative_cycle, project_by_ray

    side = int(round(spec.states ** 0.5))
    if side * side != spec.states or spec.alphabet_size != 4:
        raise ValueError("random-grid needs a square state count and four letters")
    names = _state_names(spec.states)
    moves = {"a": (0, 1), "b": (1, 0), "c": (0, -1), "d": (-1, 0)}
    delta = {}
    for i, p in enumerate(names):
        r, c = divmod(i, side)
        for a, (dr, dc) in moves.items():
            delta[p, a] = names[((r + dr) % side) * side + (c + dc) % side]
    while True:
        g = {k: _sample(rng, 2, lambda v: v != (0, 0)) for k in sorted(delta)}
        every_state = all(any(min(_wedge_signs(g[p, a])) < 0 for a in moves) for p in names)
        if not every_state:
            continue
        carrier = _build(spec, delta, g)
        rays = extreme_dual_rays(spec.cone).rays
        if all(detect_negative_cycle(project_by_ray(carrier, r)).cycle is not None for r in rays):
            return carrier


def _positive_cell(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    delta = _skeleton(rng, spec.states, spec.alphabet_size)
    g = {k: _sample(rng, 2, lambda v: min(_wedge_signs(v)) > 0) for k in sorted(delta)}
    return _build(spec, delta, g)


def _near_boundary(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    """Increments on a wedge face or one unit off it."""

    def near(v):
        s = _wedge_signs(v)
        return v != (0, 0) and min(abs(s[0]), abs(s[1])) <= 1

    delta = _skeleton(rng, spec.states, spec.alphabet_size)
    keys = sorted(delta)
    g = {k: _sample(rng, 2, near) for k in keys}
    # at least one tight increment is guaranteed, not left to chance
    g[keys[0]] = _sample(rng, 2, lambda v: v != (0, 0) and 0 in _wedge_signs(v))
    return _build(spec, delta, g)


def _large_alphabet(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    delta = _skeleton(rng, spec.states, spec.alphabet_size)
    g = {k: _sample(rng, 2, lambda v: v != (0, 0)) for k in sorted(delta)}
    return _build(spec, delta, g)


def _high_dimensional(spec: FamilySpec, rng: SplitMix64) -> WeightedCarrier:
    delta = _skeleton(rng, spec.states, spec.alphabet_size)
    g = {k: _sample(rng, 4, lambda v: any(v)) for k in sorted(delta)}
    return _build(spec, delta, g)


FAMILIES = {
    "resource-monitor": (FamilySpec("resource-monitor", 12, 4, 2, WEDGE), _resource_monitor),
    "random-grid": (FamilySpec("random-grid", 16, 4, 2, WEDGE), _random_grid),
    "positive-cell": (FamilySpec("positive-cell", 10, 3, 2, WEDGE), _positive_cell),
    "near-boundary": (FamilySpec("near-boundary", 14, 4, 2, WEDGE), _near_boundary),
    "large-alphabet": (FamilySpec("large-alphabet", 8, 8, 2, WEDGE), _large_alphabet),
    "high-dimensional": (FamilySpec("high-dimensional", 9, 3, 4, ConeSpec.from_rays(HIGH_DIM_RAYS)), _high_dimensional),
}


def family_spec(name: str, seed: Optional[int] = None) -> FamilySpec:
    if name not in FAMILIES:
        raise KeyError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    base = FAMILIES[name][0]
    return FamilySpec(base.name, base.states, base.alphabet_size, base.dimension, base.cone,
                      DEFAULT_SEED if seed is None else seed)


def generate(spec: FamilySpec | str, seed: Optional[int] = None) -> WeightedCarrier:
    """Carrier for a named family; a pure function of (name, seed)."""
    if isinstance(spec, str):
        if spec in FIXTURES:
            return FIXTURES[spec]()
        spec = family_spec(spec, seed)
    elif spec.seed is None:
        spec = family_spec(spec.name, seed)
    builder = FAMILIES[spec.name][1]
    return builder(spec, SplitMix64(_family_seed(spec.name, spec.seed)))


# -- example carriers ---------------------------------------------------------

def two_state() -> WeightedCarrier:
    delta = {("p", "a"): "p", ("q", "a"): "q", ("p", "b"): "q", ("q", "b"): "p"}
    g = {("p", "a"): (1, 2), ("q", "a"): (2, 4), ("p", "b"): (4, 2), ("q", "b"): (4, 2)}
    return WeightedCarrier(2, ("a", "b"), ("p", "q"), "p", delta, g, {}, WEDGE)


def _loop_carrier(labels: dict, dim: int = 2, cone: ConeSpec = WEDGE) -> WeightedCarrier:
    # Disconnected self-loop states: every state is its own root.
    states = tuple(labels)
    delta = {(s, "a"): s for s in states}
    g = {(s, "a"): v for s, v in labels.items()}
    return WeightedCarrier(dim, ("a",), states, states, delta, g, {}, cone)


def four_block() -> WeightedCarrier:
    return _loop_carrier({"s++": (1, 2), "s0+": (2, 2), "s-+": (4, 2), "s+0": (-2, 2)})


def four_block_variant() -> WeightedCarrier:
    """``(2, 4)`` in place of ``(2, 2)``: same open cell as ``(1, 2)``."""
    return _loop_carrier({"s++": (1, 2), "s++'": (2, 4), "s-+": (4, 2), "s+0": (-2, 2)})


def resource_monitor_3() -> WeightedCarrier:
    table = {
        "p0": {"a": ("p1", (1, 2)), "b": ("p2", (4, 2)), "c": ("p0", (2, 2))},
        "p1": {"a": ("p1", (2, 4)), "b": ("p2", (4, 2)), "c": ("p0", (-2, 2))},
        "p2": {"a": ("p2", (1, 1)), "b": ("p2", (4, 2)), "c": ("p0", (1, 3))},
    }
    delta = {(p, a): t for p, row in table.items() for a, (t, _) in row.items()}
    g = {(p, a): v for p, row in table.items() for a, (_, v) in row.items()}
    return WeightedCarrier(2, ("a", "b", "c"), ("p0", "p1", "p2"), "p0", delta, g, {}, WEDGE)


def worked_example(perturbed: bool = False) -> WeightedCarrier:
    """Two residual behaviours u0 -> (1,2) and u1 -> (2,4), or (4,2) when perturbed.

    Every continuation from ``u0`` and ``u1`` is a positive combination of
    the two labels, so the proportional case never leaves the open cell.
    """
    x1 = (4, 2) if perturbed else (2, 4)
    delta = {("u0", "a"): "u1", ("u1", "a"): "u1"}
    g = {("u0", "a"): (1, 2), ("u1", "a"): x1}
    return WeightedCarrier(2, ("a",), ("u0", "u1"), "u0", delta, g, {}, WEDGE)


FIXTURES = {
    "two-state": two_state,
    "four-block": four_block,
    "four-block-variant": four_block_variant,
    "resource-monitor-3": resource_monitor_3,
    "worked-example": worked_example,
    "worked-example-perturbed": lambda: worked_example(perturbed=True),
}


def fixtures() -> dict:
    return {name: make() for name, make in FIXTURES.items()}
