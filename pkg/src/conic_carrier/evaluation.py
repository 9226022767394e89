"""Evaluation harness: counters, working-set estimate and the benchmark table."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .families import DEFAULT_SEED, family_spec, generate
from .quotient import bounded_conic_quotient
from .scalar import detect_negative_cycle, project_by_ray

CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "family",
    "horizon",
    "word_pairs",
    "ray_evals",
    "blocks_raw",
    "blocks_stable",
    "neg_witnesses",
    "first_witness_len",
    "witness_density_permille",
    "unique_witness_states",
    "unresolved_cells",
    "runtime_ms",
    "memory_kib",
)


def word_pairs(s: int, horizon: int) -> int:
    """Number of ``(x, z)`` with ``|xz| <= horizon`` over ``s`` letters."""
    if s < 1 or horizon < 0:
        raise ValueError("need s >= 1 and horizon >= 0")
    return sum((n + 1) * s**n for n in range(horizon + 1))


def ray_evals(states: int, pairs: int, rays: int) -> int:
    return states * pairs * rays


def memory_estimate_kib(states: int, pairs: int, d: int, e: int, witnesses: int, s: int) -> int:
    """Machine-independent working-set estimate in KiB, rounded up."""
    if min(states, pairs, d, e, witnesses, s) < 0:
        raise ValueError("inputs must be nonnegative")
    total = 32 * states * pairs * d + states * pairs * e + 64 * witnesses + states * s * (8 + 32 * d)
    return -(-total // 1024)


def witness_density_permille(witnesses: int, evals: int) -> int:
    """Negative witnesses per thousand ray evaluations, truncated."""
    return 0 if evals == 0 else (1000 * witnesses) // evals


# (family, horizon) rows of the benchmark table, in table order.
TABLE_ROWS = (
    ("resource-monitor", 1),
    ("resource-monitor", 2),
    ("resource-monitor", 3),
    ("random-grid", 3),
    ("positive-cell", 3),
    ("near-boundary", 1),
    ("near-boundary", 2),
    ("near-boundary", 3),
    ("large-alphabet", 2),
    ("high-dimensional", 3),
)

# Reference values per row: (N, s, d, e, word_pairs, ray_evals, blocks, witnesses, memory_kib).
REFERENCE_ROWS = {
    ("resource-monitor", 1): (12, 4, 2, 2, 9, 216, 12, 10, 11),
    ("resource-monitor", 2): (12, 4, 2, 2, 57, 1368, 12, 90, 54),
    ("resource-monitor", 3): (12, 4, 2, 2, 313, 7512, 12, 540, 280),
    ("random-grid", 3): (16, 4, 2, 2, 313, 10016, 16, 671, 370),
    ("positive-cell", 3): (10, 3, 2, 2, 142, 2840, 1, 0, 94),
    ("near-boundary", 1): (14, 4, 2, 2, 9, 252, 6, 9, 13),
    ("near-boundary", 2): (14, 4, 2, 2, 57, 1596, 14, 87, 61),
    ("near-boundary", 3): (14, 4, 2, 2, 313, 8764, 14, 565, 322),
    ("large-alphabet", 2): (8, 8, 2, 2, 209, 3344, 8, 97, 119),
    ("high-dimensional", 3): (9, 3, 4, 6, 142, 7668, 9, 627, 211),
}


class CounterMismatch(AssertionError):
    pass


@dataclass
class RayScan:
    ray: tuple
    has_negative_cycle: bool
    edge_scans: int
    relaxations: int

    def to_json(self) -> dict:
        return {
            "ray": [int(e) for e in self.ray],
            "has_negative_cycle": self.has_negative_cycle,
            "edge_scans": self.edge_scans,
            "relaxations": self.relaxations,
        }


@dataclass
class EvalRecord:
    family: str
    horizon: int
    word_pairs: int
    ray_evals: int
    blocks_raw: int
    blocks_stable: int
    neg_witnesses: int
    first_witness_len: Optional[int]
    witness_density_permille: int
    unique_witness_states: int
    unresolved_cells: int
    runtime_ms: float
    memory_kib: int
    seed: int = DEFAULT_SEED
    scalar: list = field(default_factory=list)

    def csv_row(self) -> list:
        return [
            self.family,
            self.horizon,
            self.word_pairs,
            self.ray_evals,
            self.blocks_raw,
            self.blocks_stable,
            self.neg_witnesses,
            "" if self.first_witness_len is None else self.first_witness_len,
            self.witness_density_permille,
            self.unique_witness_states,
            self.unresolved_cells,
            f"{self.runtime_ms:.3f}",
            self.memory_kib,
        ]

    def to_json(self) -> dict:
        out = dict(zip(CSV_COLUMNS, self.csv_row()))
        out["first_witness_len"] = self.first_witness_len
        out["runtime_ms"] = round(self.runtime_ms, 3)
        out["seed"] = self.seed
        out["scalar"] = [s.to_json() for s in self.scalar]
        return out


def evaluate(family: str, horizon: int, seed: int = DEFAULT_SEED, first_witness_only: bool = False) -> EvalRecord:
    """One table row: conic pass (timed), counter cross-check, per-ray scalar scan."""
    spec = family_spec(family, seed)
    carrier = generate(spec)
    rays = spec.rays
    n, s, d, e = len(carrier.states), len(carrier.alphabet), carrier.dim, len(rays)

    start = time.perf_counter()
    result = bounded_conic_quotient(carrier, rays, horizon, first_witness_only=first_witness_only)
    runtime_ms = (time.perf_counter() - start) * 1000.0

    pairs = word_pairs(s, horizon)
    evals = ray_evals(n, pairs, e)
    if (result.word_pairs, result.ray_evals) != (pairs, evals):
        raise CounterMismatch(
            f"{family} H={horizon}: enumerated {result.word_pairs} pairs / {result.ray_evals} evaluations, "
            f"closed forms give {pairs} / {evals}"
        )
    w = len(result.witnesses)
    scans = []
    for i, r in enumerate(rays):
        search = detect_negative_cycle(project_by_ray(carrier, r, i))
        scans.append(RayScan(r, search.cycle is not None, search.edge_scans, search.relaxations))
    return EvalRecord(
        family=family,
        horizon=horizon,
        word_pairs=pairs,
        ray_evals=evals,
        blocks_raw=len(result.raw_partition),
        blocks_stable=len(result.stable_partition),
        neg_witnesses=w,
        first_witness_len=result.first_witness_length,
        witness_density_permille=witness_density_permille(w, evals),
        unique_witness_states=result.unique_witness_states,
        unresolved_cells=result.unresolved_cells,
        runtime_ms=runtime_ms,
        memory_kib=memory_estimate_kib(n, pairs, d, e, w, s),
        seed=seed,
        scalar=scans,
    )


def run_eval(rows: Sequence[tuple] = TABLE_ROWS, seed: int = DEFAULT_SEED, first_witness_only: bool = False) -> list:
    return [evaluate(f, h, seed, first_witness_only) for f, h in rows]


def records_to_csv(records: Sequence[EvalRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def records_to_json(records: Sequence[EvalRecord]) -> str:
    doc = {"schema_version": CSV_SCHEMA_VERSION, "columns": list(CSV_COLUMNS), "rows": [r.to_json() for r in records]}
    return json.dumps(doc, indent=2) + "\n"
