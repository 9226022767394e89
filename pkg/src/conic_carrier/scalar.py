"""Per-ray scalar fallback: Bellman-Ford over projected carriers, potentials, counterexamples."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .carrier import WeightedCarrier, Word
from .cones import _covectors
from .exact import DimensionError, dot, json_vector, vector


class CounterexampleKind(enum.Enum):
    NEGATIVE_CYCLE = "negative-cycle"
    NEGATIVE_ACCUMULATION = "negative-accumulation"


@dataclass(frozen=True)
class ScalarGraph:
    states: tuple
    letters: tuple
    delta: dict
    cost: dict
    terminal: dict
    ray_index: int = 0

    def restrict(self, keep: Sequence[str]) -> "ScalarGraph":
        """Subgraph induced by ``keep``; edges leaving it are dropped."""
        ks = set(keep)
        states = tuple(s for s in self.states if s in ks)
        delta = {k: v for k, v in self.delta.items() if k[0] in ks and v in ks}
        cost = {k: self.cost[k] for k in delta}
        return ScalarGraph(states, self.letters, delta, cost, {s: self.terminal[s] for s in states}, self.ray_index)

    def edges(self):
        """Edges in canonical scan order: states, then letters."""
        for p in self.states:
            for a in self.letters:
                if (p, a) in self.delta:
                    yield p, a, self.delta[p, a], self.cost[p, a]


@dataclass(frozen=True)
class CounterexamplePath:
    start: str
    letters: Word
    kind: CounterexampleKind
    total_cost: Fraction
    # subtracted from the accumulated value; terminal(start) for residual-style paths
    baseline: Fraction = Fraction(0)

    def replay(self, graph: ScalarGraph) -> Fraction:
        p = self.start
        total = Fraction(0)
        for a in self.letters:
            total += graph.cost[p, a]
            p = graph.delta[p, a]
        if self.kind is CounterexampleKind.NEGATIVE_CYCLE:
            if p != self.start:
                raise ValueError("cycle does not return to its start state")
            return total
        return total + graph.terminal[p] - self.baseline

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "letters": list(self.letters),
            "kind": self.kind.value,
            "total_cost": str(self.total_cost),
        }


@dataclass(frozen=True)
class PotentialCertificate:
    phi: dict

    def violations(self, graph: ScalarGraph) -> list:
        return [(p, a) for p, a, q, c in graph.edges() if self.phi[q] > self.phi[p] + c]

    def is_valid(self, graph: ScalarGraph) -> bool:
        return not self.violations(graph)

    def to_json(self) -> dict:
        return {p: str(v) for p, v in self.phi.items()}


@dataclass
class CycleSearch:
    cycle: Optional[CounterexamplePath]
    edge_scans: int
    relaxations: int
    distances: dict = field(default_factory=dict)


class NegativeCycleError(RuntimeError):
    pass


def project_by_ray(carrier: WeightedCarrier, ray, ray_index: int = 0) -> ScalarGraph:
    ray = vector(ray)
    if len(ray) != carrier.dim:
        raise DimensionError(f"ray of dimension {len(ray)} on a {carrier.dim}-dimensional carrier")
    cost = {k: dot(ray, v) for k, v in carrier.g.items()}
    terminal = {p: dot(ray, v) for p, v in carrier.tau.items()}
    return ScalarGraph(carrier.states, carrier.alphabet, dict(carrier.delta), cost, terminal, ray_index)


def detect_negative_cycle(graph: ScalarGraph) -> CycleSearch:
    """Bellman-Ford from a virtual source joined to every state at cost 0.

    A relaxation is a strict improvement after the zero initialization.
    Stops early after a round without improvement; a relaxation in round N
    (N = number of states) proves a negative cycle.
    """
    n = len(graph.states)
    dist = {s: Fraction(0) for s in graph.states}
    pred: dict = {}
    scans = relax = 0

    def one_round():
        nonlocal scans, relax
        changed = False
        for p, a, q, c in graph.edges():
            scans += 1
            if dist[p] + c < dist[q]:
                dist[q] = dist[p] + c
                pred[q] = (p, a)
                relax += 1
                changed = True
        return changed

    for _ in range(n):
        if not one_round():
            return CycleSearch(None, scans, relax, dict(dist))
    # A relaxation in round N: some cycle of negative cost exists. Keep relaxing
    # until it shows up as a cycle of predecessor pointers (every such cycle is negative).
    cycle = _pred_cycle(pred)
    while cycle is None:
        one_round()
        cycle = _pred_cycle(pred)
    start = cycle[0][0]
    letters = tuple(a for _, a in cycle)
    total = sum((graph.cost[e] for e in cycle), Fraction(0))
    return CycleSearch(CounterexamplePath(start, letters, CounterexampleKind.NEGATIVE_CYCLE, total), scans, relax, dict(dist))


def _pred_cycle(pred: dict) -> Optional[list]:
    """First cycle in the predecessor graph, as forward edges (p, letter)."""
    done: set = set()
    for v0 in sorted(pred):
        path = []
        on_path = {}
        v = v0
        while v in pred and v not in done and v not in on_path:
            on_path[v] = len(path)
            path.append(v)
            v = pred[v][0]
        if v in on_path:
            loop = path[on_path[v]:]
            edges = [pred[u] for u in loop]
            edges.reverse()
            return edges
        done.update(path)
    return None


def build_potentials(graph: ScalarGraph, search: Optional[CycleSearch] = None) -> PotentialCertificate:
    """Shortest distances from the virtual source, validated edge by edge."""
    search = search or detect_negative_cycle(graph)
    if search.cycle is not None:
        raise NegativeCycleError(f"no potential exists: negative cycle {search.cycle}")
    cert = PotentialCertificate(dict(search.distances))
    bad = cert.violations(graph)
    if bad:
        raise AssertionError(f"internal error: potential violates edges {bad}")
    return cert


def terminal_check(graph: ScalarGraph, roots: Sequence[str]) -> Optional[CounterexamplePath]:
    """Shortest path from the roots plus terminal offset must stay >= 0.

    Only meaningful once the graph has no negative cycle.
    """
    dist = {s: None for s in graph.states}
    pred: dict = {}
    for r in roots:
        if r in dist:
            dist[r] = Fraction(0)
    for _ in range(len(graph.states)):
        changed = False
        for p, a, q, c in graph.edges():
            if dist[p] is not None and (dist[q] is None or dist[p] + c < dist[q]):
                dist[q] = dist[p] + c
                pred[q] = (p, a)
                changed = True
        if not changed:
            break
    for s in graph.states:
        if dist[s] is not None and dist[s] + graph.terminal[s] < 0:
            letters = []
            u = s
            # strict improvements only, so without negative cycles pred is a tree rooted at the roots
            while u in pred and len(letters) <= len(graph.states):
                u, a = pred[u]
                letters.append(a)
            letters.reverse()
            return CounterexamplePath(u, tuple(letters), CounterexampleKind.NEGATIVE_ACCUMULATION, dist[s] + graph.terminal[s])
    return None


@dataclass
class RayVerdict:
    ray_index: int
    ray: tuple
    passed: bool
    certificate: Optional[PotentialCertificate] = None
    counterexample: Optional[CounterexamplePath] = None
    source: str = ""  # "conic-witness", "bellman-ford" or "terminal"
    edge_scans: int = 0
    relaxations: int = 0

    def to_json(self) -> dict:
        out = {
            "ray": json_vector(self.ray),
            "status": "PASS" if self.passed else "FAIL",
            "edgeScans": self.edge_scans,
            "relaxations": self.relaxations,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
            out["source"] = self.source
        return out


@dataclass
class FallbackResult:
    verdicts: list

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def first_counterexample(self) -> Optional[CounterexamplePath]:
        return next((v.counterexample for v in self.verdicts if not v.passed), None)

    def to_json(self) -> dict:
        return {"status": "PASS" if self.passed else "FAIL", "rays": [v.to_json() for v in self.verdicts]}


def fallback_workflow(
    carrier: WeightedCarrier,
    rays,
    unresolved: Optional[Sequence[str]] = None,
    prior_witnesses: Sequence = (),
) -> FallbackResult:
    """Scalar verification per ray; a conic witness settles its ray immediately."""
    ray_list = _covectors(rays)
    if not ray_list:
        raise ValueError("fallback needs at least one ray")
    has_terminals = any(any(e != 0 for e in v) for v in carrier.tau.values())
    verdicts = []
    for i, r in enumerate(ray_list):
        graph = project_by_ray(carrier, r, i)
        prior = next((w for w in prior_witnesses if w.ray_index == i), None)
        if prior is not None:
            start = carrier.run(prior.state, prior.context)
            cex = CounterexamplePath(
                start, tuple(prior.continuation), CounterexampleKind.NEGATIVE_ACCUMULATION, prior.value, graph.terminal[start]
            )
            verdicts.append(RayVerdict(i, r, False, counterexample=cex, source="conic-witness"))
            continue
        if unresolved is not None:
            graph = graph.restrict(unresolved)
        search = detect_negative_cycle(graph)
        if search.cycle is not None:
            verdicts.append(
                RayVerdict(i, r, False, counterexample=search.cycle, source="bellman-ford",
                           edge_scans=search.edge_scans, relaxations=search.relaxations)
            )
            continue
        cert = build_potentials(graph, search)
        verdict = RayVerdict(i, r, True, certificate=cert, edge_scans=search.edge_scans, relaxations=search.relaxations)
        if has_terminals:
            cex = terminal_check(graph, [s for s in carrier.initial if s in graph.states])
            if cex is not None:
                verdict.passed = False
                verdict.counterexample = cex
                verdict.source = "terminal"
        verdicts.append(verdict)
    return FallbackResult(verdicts)
