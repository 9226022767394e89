"""Command-line front end.

Exit status: 0 on success, 1 when a negative witness or negative cycle is
found, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .arrangements import CovectorFamily, FamilyTooLarge, compare_arrangements
from .carrier import CarrierError, WeightedCarrier, load_carrier, render_word, residual, save_carrier
from .cones import ConeError, ConeSpec, extreme_dual_rays
from .evaluation import TABLE_ROWS, records_to_csv, records_to_json, run_eval
from .exact import DimensionError, json_vector, render_vector
from .families import DEFAULT_SEED, FAMILIES, FIXTURES, generate
from .quotient import bounded_conic_quotient
from .scalar import fallback_workflow

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_carrier(path: str) -> WeightedCarrier:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return load_carrier(text)
    except CarrierError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_cone(path: str) -> ConeSpec:
    doc = _read_json(path)
    if isinstance(doc, dict) and "cone" in doc and "edges" in doc:
        doc = doc["cone"]
    try:
        return ConeSpec.from_json(doc)
    except (ConeError, ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _rays_for(carrier: WeightedCarrier, args):
    cone = _load_cone(args.cone) if getattr(args, "cone", None) else carrier.cone
    if cone is None:
        raise InputError("carrier has no cone; pass --cone FILE")
    if cone.dim != carrier.dim:
        raise InputError(f"cone dimension {cone.dim} differs from carrier dimension {carrier.dim}")
    return extreme_dual_rays(cone, keep_redundant=getattr(args, "keep_redundant", False))


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_dual_rays(args) -> int:
    cone = _load_cone(args.cone_file)
    rays = extreme_dual_rays(cone, keep_redundant=args.keep_redundant)
    doc = {"rays": [json_vector(r) for r in rays.rays], "lineality": [json_vector(v) for v in rays.lineality_basis]}
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_quotient(args) -> int:
    carrier = _load_carrier(args.carrier)
    rays = _rays_for(carrier, args)
    result = bounded_conic_quotient(carrier, rays, args.horizon, first_witness_only=args.first_witness_only)
    doc = result.to_json()
    doc["horizon"] = args.horizon
    doc["rays"] = [json_vector(r) for r in rays.rays]
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_FAIL if result.witnesses else EXIT_OK


def cmd_screen(args) -> int:
    carrier = _load_carrier(args.carrier)
    rays = _rays_for(carrier, args)
    result = bounded_conic_quotient(carrier, rays, args.horizon, first_witness_only=args.first_witness_only)
    lines = []
    for w in result.witnesses:
        ray = rays.rays[w.ray_index]
        res = residual(carrier, w.state, w.context, w.continuation)
        lines.append(
            f"state {w.state} x={render_word(w.context)} z={render_word(w.continuation)}: "
            f"residual {render_vector(res)}, ray #{w.ray_index} {render_vector(ray)} gives {w.value} < 0, "
            f"so the residual lies outside the cone"
        )
    lines.append(f"{len(result.witnesses)} negative witness(es) over {result.word_pairs} word pairs")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_FAIL if result.witnesses else EXIT_OK


def cmd_fallback(args) -> int:
    carrier = _load_carrier(args.carrier)
    rays = _rays_for(carrier, args)
    prior = ()
    if args.horizon is not None:
        prior = bounded_conic_quotient(carrier, rays, args.horizon).witnesses
    result = fallback_workflow(carrier, rays, prior_witnesses=prior)
    _emit(json.dumps(result.to_json(), indent=2) + "\n", args.output)
    return EXIT_OK if result.passed else EXIT_FAIL


def _load_family(path: str) -> CovectorFamily:
    try:
        return CovectorFamily.from_json(_read_json(path))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_refine(args) -> int:
    a, b = _load_family(args.family_a), _load_family(args.family_b)
    try:
        verdict = compare_arrangements(a, b)
    except (DimensionError, FamilyTooLarge) as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        _emit(json.dumps(verdict.to_json(), indent=2) + "\n", args.output)
        return EXIT_OK
    lines = [verdict.relation.value]
    if verdict.a_not_finer:
        x, y = verdict.a_not_finer
        lines.append(f"A does not refine B: {render_vector(x)} and {render_vector(y)} share A signs, differ under B")
    if verdict.b_not_finer:
        x, y = verdict.b_not_finer
        lines.append(f"B does not refine A: {render_vector(x)} and {render_vector(y)} share B signs, differ under A")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.fixtures:
        out = Path(args.fixtures)
        out.mkdir(parents=True, exist_ok=True)
        for name, make in FIXTURES.items():
            (out / f"{name}.json").write_text(save_carrier(make()))
        return EXIT_OK
    if not args.family:
        raise InputError("gen needs a family name or --fixtures DIR")
    if args.family not in FAMILIES and args.family not in FIXTURES:
        known = ", ".join(sorted(FAMILIES) + sorted(FIXTURES))
        raise InputError(f"unknown family {args.family!r}; known: {known}")
    _emit(save_carrier(generate(args.family, args.seed)), args.output)
    return EXIT_OK


def cmd_eval(args) -> int:
    rows = TABLE_ROWS
    if args.family:
        rows = [r for r in TABLE_ROWS if r[0] in args.family]
        if not rows:
            raise InputError(f"no table rows for {', '.join(args.family)}")
    records = run_eval(rows, seed=args.seed, first_witness_only=args.first_witness_only)
    text = records_to_json(records) if args.format == "json" else records_to_csv(records)
    _emit(text, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conic-carrier", description="Cone-induced sign quotients of vector-weighted automata.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, horizon_default: Optional[int] = 2):
        p.add_argument("carrier", help="carrier JSON file")
        p.add_argument("--horizon", "-H", type=int, default=horizon_default, help="bound on |xz|")
        p.add_argument("--cone", help="cone JSON file overriding the carrier's cone")
        p.add_argument("--keep-redundant", action="store_true", help="keep non-extreme explicit rays")
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("dual-rays", help="extreme dual rays and lineality space of a cone")
    p.add_argument("cone_file", help="cone JSON file, or a carrier file with a cone")
    p.add_argument("--keep-redundant", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dual_rays)

    p = sub.add_parser("quotient", help="bounded conic quotient as JSON")
    common(p)
    p.add_argument("--first-witness-only", action="store_true")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("screen", help="list negative witnesses")
    common(p)
    p.add_argument("--first-witness-only", action="store_true")
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("fallback", help="per-ray scalar verification")
    common(p, horizon_default=None)
    p.set_defaults(func=cmd_fallback)

    p = sub.add_parser("refine", help="compare two covector families")
    p.add_argument("family_a")
    p.add_argument("family_b")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("gen", help="emit a generated family or example carrier")
    p.add_argument("family", nargs="?")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--fixtures", metavar="DIR", help="write every example carrier into DIR")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="regenerate the benchmark table")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--family", action="append", help="restrict to this family (repeatable)")
    p.add_argument("--first-witness-only", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "horizon", None) is not None and args.horizon < 0:
        print("error: horizon must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (InputError, ConeError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
