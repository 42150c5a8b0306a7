"""Command-line interface.

Exit codes: 0 success or match, 1 negative result (no match, table check
failed), 2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .chain import closure_check, constant_space_polygon, regular_polygon
from .dynamics import FLOW_KINDS, make_flow, stability_probe
from .equivalence import match_polygons
from .errors import CentroflowError
from .io import (DocumentError, dumps_polygon, format_signature, load_polygon, polygon_svg,
                 save_polygon, signature_csv)
from .polygon import compute_signature, is_planar, signature_tolerance
from .shapes import convexity_check, random_polygon
from .tables import REPRODUCERS, reproduce, reproduce_table_5

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"parameter {item!r} is not of the form key=value")
        try:
            params[key] = float(value)
        except ValueError:
            params[key] = value
    return params


def cmd_invariants(args) -> int:
    polygon = load_polygon(args.file)
    sig = compute_signature(polygon)
    print(format_signature(sig, args.digits))
    if args.csv:
        Path(args.csv).write_text(signature_csv(sig))
    return EXIT_OK


def cmd_flow(args) -> int:
    params = _parse_params(args.param)
    if args.input:
        polygon = load_polygon(args.input)
    else:
        polygon = random_polygon(np.random.default_rng(args.seed), args.n, args.dim)
    try:
        flow = make_flow(args.kind, **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    tol = args.tol if args.tol is not None else signature_tolerance()
    report, trace = stability_probe(flow, polygon, args.gens, args.max_period, tol)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for g, rec in enumerate(trace.generations):
        save_polygon(rec.polygon, out / f"gen_{g:04d}.json")
        (out / f"gen_{g:04d}.csv").write_text(signature_csv(rec.signature))
        if args.svg:
            (out / f"gen_{g:04d}.svg").write_text(polygon_svg(rec.polygon))
    summary = {
        "flow": flow.kind,
        "params": flow.params,
        "generations": len(trace) - 1,
        "stop_reason": trace.stop_reason,
        "stable": report.stable,
        "first_stable_generation": report.first_stable_generation,
        "periodic": None if report.periodic is None else
        {"period": report.periodic.period, "cyclic_shift": report.periodic.cyclic_shift},
        "residual": report.residual,
        "max_cross_check": trace.max_cross_check(),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    if report.stable:
        print(f"stable at generation {report.first_stable_generation}")
    elif report.periodic:
        print(f"periodic from generation {report.first_stable_generation}: period "
              f"{report.periodic.period}, cyclic shift {report.periodic.cyclic_shift}")
    else:
        print(trace.stop_reason)
    print(format_signature(trace.signatures[-1]))
    return EXIT_OK


def cmd_match(args) -> int:
    P, Q = load_polygon(args.P), load_polygon(args.Q)
    tol = signature_tolerance()
    report = match_polygons(P, Q, args.mode, allow_reversal=args.allow_reversal, signature_tol=tol)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.matched else EXIT_NEGATIVE


def cmd_generate(args) -> int:
    if args.kind == "regular":
        polygon = regular_polygon(args.p, args.l)
    else:
        polygon = constant_space_polygon(args.p, args.l)
    if args.out:
        save_polygon(polygon, args.out)
    else:
        print(dumps_polygon(polygon))
    return EXIT_OK


def cmd_reproduce(args) -> int:
    tables = sorted(REPRODUCERS) if args.table == "all" else [int(args.table)]
    ok = True
    for t in tables:
        result = reproduce_table_5(variant=args.variant) if t == 5 else reproduce(t)
        print(result.summary())
        ok &= result.passed
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_check(args) -> int:
    polygon = load_polygon(args.file)
    sig = compute_signature(polygon)
    print(f"{len(polygon)} vertices, {polygon.dimension}D, {'closed' if polygon.closed else 'open'}")
    print(f"planar: {is_planar(sig)}")
    if polygon.closed:
        closure = closure_check(sig)
        print(f"chain closes: {closure.is_closed} (defect {closure.matrix_product_defect:.2e}, "
              f"product of kappa {closure.kappa_product:.6f})")
        if closure.centrosymmetry:
            print(f"centrosymmetric about the {closure.centrosymmetry}")
        if polygon.dimension == 2:
            conv = convexity_check(polygon)
            print(f"simple: {conv.is_simple}, convex: {conv.is_convex}")
            for note in conv.diagnostics:
                print(f"  {note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="centroflow", description="Centroaffine polygon invariants and flows.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="print the signature of a polygon file")
    p.add_argument("file")
    p.add_argument("--csv", help="also write a full-precision CSV here")
    p.add_argument("--digits", type=int, default=4)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("flow", help="iterate a flow and probe for stability")
    p.add_argument("--kind", choices=FLOW_KINDS, required=True)
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="flow parameter, e.g. alpha=0.8, c=0.1, recipe=mean")
    p.add_argument("--gens", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--input", help="polygon file; a seeded random polygon is used otherwise")
    p.add_argument("--n", type=int, default=7, help="vertex count of the random polygon")
    p.add_argument("--dim", type=int, choices=(2, 3), default=3)
    p.add_argument("--max-period", type=int, default=8)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--svg", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("match", help="test two polygons for equivalence")
    p.add_argument("P")
    p.add_argument("Q")
    p.add_argument("--mode", choices=("affine2", "centroaffine3"), default="affine2")
    p.add_argument("--allow-reversal", action="store_true")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("generate", help="write a constant-curvature polygon")
    p.add_argument("--kind", choices=("regular", "constant-space"), default="regular")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reproduce", help="rerun a reference table and compare")
    p.add_argument("--table", choices=[str(t) for t in REPRODUCERS] + ["all"], required=True)
    p.add_argument("--variant", choices=["verbatim", "convex"], default="verbatim",
                   help="last-vertex rule of the endpoint flow (table 5)")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("check", help="closure, convexity and planarity report")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, DocumentError, CentroflowError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
