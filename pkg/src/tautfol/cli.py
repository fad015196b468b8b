"""Command line front end.

Commands operate on a manifold JSON file (format documented in graph.py):

    tautfol validate      FILE    graph diagnostics
    tautfol longitude     FILE    rational longitude of a solid-torus graph
    tautfol detect        FILE    detected/strongly detected boundary slopes
    tautfol ctf           FILE    taut-foliation decision for a closed graph
    tautfol oracle-check  FILE    closed form vs brute force cross-check

Exit codes: 0 success (including a mathematical "admits = false"), 1
malformed input, 2 role mismatch, 3 internal-consistency failure detected by
the oracle cross-check.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .decide import (
    DecisionError,
    check_degenerate,
    decide_ctf,
    detect_tree,
    iter_piece_evaluations,
)
from .graph import (
    ManifoldFormatError,
    RoleError,
    load_manifold,
    rational_longitude,
    split_at_edge,
    validate,
)
from .oracle import GridSpec, grid_union, jn_exhaustive_extremal
from .seifert import (
    core_interval,
    default_n_bound,
    jn_refine_high,
    jn_refine_low,
    v_count,
)

SCHEMA = 1
EXIT_OK = 0
EXIT_MALFORMED = 1
EXIT_ROLE = 2
EXIT_ORACLE = 3


def _fraction_str(value):
    if value is None:
        return "inf"
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def _slope_json(slope):
    return {"slope": str(slope), "tau": _fraction_str(slope.tau)}


def _arc_json(arc):
    out = {"kind": arc.kind}
    if arc.is_point:
        out["point"] = _slope_json(arc.start)
    elif arc.kind == "arc":
        out["start"] = _slope_json(arc.start)
        out["end"] = _slope_json(arc.end)
    return out


def _certificate_json(cert):
    if cert is None:
        return None
    return {
        "N": cert.n_value,
        "A": cert.a_value,
        "side": cert.side,
        "cones": list(cert.cone_numerators),
        "boundaries": [[j, v] for j, v in cert.boundary_numerators],
        "excluded": list(cert.excluded),
        "target": cert.target_numerator,
    }


def _detection_json(result):
    return {
        "detected": _arc_json(result.detected),
        "branch": result.branch,
        "exceptional": [
            {
                "slope": str(e.slope),
                "tau": _fraction_str(e.slope.tau),
                "status": e.status.value,
                "reason": e.reason,
            }
            for e in result.exceptions
        ],
        "refinement_low": _certificate_json(result.low_certificate),
        "refinement_high": _certificate_json(result.high_certificate),
    }


def _emit(report, fmt, text_lines):
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_validate(graph, args):
    diags = validate(graph)
    report = {"schema": SCHEMA, "command": "validate", "diagnostics": diags,
              "clean": not diags}
    lines = ["validation: clean"] if not diags else diags
    _emit(report, args.format, lines)
    return EXIT_OK


def _cmd_longitude(graph, args):
    result = rational_longitude(graph)
    report = {
        "schema": SCHEMA,
        "command": "longitude",
        "longitude": _slope_json(result.slope),
        "order": result.order,
    }
    lines = [f"rational longitude: {result.slope} (tau = "
             f"{_fraction_str(result.slope.tau)}), order {result.order} in H_1"]
    _emit(report, args.format, lines)
    return EXIT_OK


def _cmd_detect(graph, args):
    result = detect_tree(graph, n_max=args.nmax)
    report = {"schema": SCHEMA, "command": "detect"}
    report.update(_detection_json(result))
    arc = result.detected
    lines = [f"detected set: {arc.kind}"]
    if arc.is_point:
        lines.append(f"  point {arc.start} (tau = {_fraction_str(arc.start.tau)})")
    elif arc.kind == "arc":
        lines.append(f"  from {arc.start} (tau = {_fraction_str(arc.start.tau)})")
        lines.append(f"  to   {arc.end} (tau = {_fraction_str(arc.end.tau)})")
    for e in result.exceptions:
        lines.append(f"  {e.status.value}: {e.slope} "
                     f"(tau = {_fraction_str(e.slope.tau)}) - {e.reason}")
    if not result.exceptions:
        lines.append("  every detected rational slope is strongly detected")
    _emit(report, args.format, lines)
    return EXIT_OK


def _cmd_ctf(graph, args):
    verdict = decide_ctf(graph, split_edge=args.split_edge, n_max=args.nmax)
    report = {
        "schema": SCHEMA,
        "command": "ctf",
        "admits": verdict.admits,
        "witness": {key: str(s) for key, s in sorted(verdict.witness.items())},
        "piece_tags": {str(k): v for k, v in sorted(verdict.piece_tags.items(),
                                                    key=lambda kv: str(kv[0]))},
        "lspace_note": verdict.note,
        "split_edge": verdict.split_edge,
    }
    lines = [f"admits co-oriented taut foliation: {verdict.admits}",
             f"note: {verdict.note}"]
    for key, s in sorted(verdict.witness.items()):
        lines.append(f"  witness slope on {key}: {s} (tau = {_fraction_str(s.tau)})")
    for k, v in sorted(verdict.piece_tags.items(), key=lambda kv: str(kv[0])):
        lines.append(f"  piece {k}: {v}")
    _emit(report, args.format, lines)
    return EXIT_OK


def _cmd_oracle_check(graph, args):
    rows = []
    ok = True
    if graph.role == "closed":
        if not graph.edges:
            raise RoleError("oracle-check on a closed graph needs a JSJ torus")
        sides = split_at_edge(graph, graph.edges[0])
    else:
        sides = (graph,)
    for side in sides:
        for piece, family in iter_piece_evaluations(side, n_max=args.nmax):
            if (not piece.base_orientable or piece.is_solid_torus_piece
                    or piece.is_product_piece or v_count(family) != 0):
                continue
            c_min, c_max = core_interval(piece, family)
            dens = [1]
            for arc in family.arcs:
                pieces_, _ = arc.tau_pieces()
                for lo, hi in pieces_:
                    dens.extend([lo.denominator, hi.denominator])
            spec = GridSpec(denominator=max(args.grid, max(dens)))
            lo, hi = grid_union(piece, family, spec)
            row = {
                "piece": str(piece.ident),
                "core": [c_min, c_max],
                "grid": [lo, hi],
                "core_matches_grid": (c_min, c_max) == (lo, hi),
            }
            n_bound = args.nmax
            if n_bound is None:
                endpoints = []
                for arc in family.arcs:
                    pieces_, _ = arc.tau_pieces()
                    for pair in pieces_:
                        endpoints.extend(pair)
                n_bound = default_n_bound(piece, endpoints)
            low = jn_refine_low(piece, family, n_max=n_bound)
            high = jn_refine_high(piece, family, n_max=n_bound)
            ex_low = jn_exhaustive_extremal(piece, family, "low", n_bound)
            ex_high = jn_exhaustive_extremal(piece, family, "high", n_bound)
            row["refine_low"] = _fraction_str(low[0]) if low else None
            row["exhaustive_low"] = _fraction_str(ex_low) if ex_low is not None else None
            row["refine_high"] = _fraction_str(high[0]) if high else None
            row["exhaustive_high"] = _fraction_str(ex_high) if ex_high is not None else None
            row["refinements_match"] = (
                ((low[0] if low else None) == ex_low)
                and ((high[0] if high else None) == ex_high))
            ok = ok and row["core_matches_grid"] and row["refinements_match"]
            rows.append(row)
        degenerate = check_degenerate(side, n_max=args.nmax)
        rows.append({
            "piece": "degenerate-cross-check",
            "is_degenerate": degenerate.is_degenerate,
            "branch": degenerate.branch,
            "consistent": degenerate.consistent,
        })
        ok = ok and degenerate.consistent
    report = {"schema": SCHEMA, "command": "oracle-check", "ok": ok, "rows": rows}
    lines = []
    for row in rows:
        lines.append(json.dumps(row, sort_keys=True))
    lines.append(f"oracle-check: {'ok' if ok else 'MISMATCH'}")
    _emit(report, args.format, lines)
    return EXIT_OK if ok else EXIT_ORACLE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tautfol",
        description="Foliation-detected slope sets and taut-foliation "
                    "decisions for graph manifolds.")
    parser.add_argument("command",
                        choices=["validate", "longitude", "detect", "ctf",
                                 "oracle-check"])
    parser.add_argument("input", help="manifold JSON file")
    parser.add_argument("--format", choices=["text", "json"], default="text")
    parser.add_argument("--nmax", type=int, default=None,
                        help="certificate search bound (default derived from the data)")
    parser.add_argument("--grid", type=int, default=24,
                        help="oracle grid denominator (default 24)")
    parser.add_argument("--split-edge", default=None,
                        help="edge ident to split along for ctf (default e0)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        graph = load_manifold(args.input)
    except ManifoldFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    handlers = {
        "validate": _cmd_validate,
        "longitude": _cmd_longitude,
        "detect": _cmd_detect,
        "ctf": _cmd_ctf,
        "oracle-check": _cmd_oracle_check,
    }
    try:
        return handlers[args.command](graph, args)
    except RoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ROLE
    except DecisionError as exc:
        print(f"internal-consistency failure: {exc}", file=sys.stderr)
        return EXIT_ORACLE


if __name__ == "__main__":
    sys.exit(main())
