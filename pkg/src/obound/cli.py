"""Command-line interface.

Exit codes: 0 ok, 1 input error, 2 infeasible data, 3 witness or violation fired.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from collections.abc import Sequence
from dataclasses import asdict

import numpy as np

from . import suites
from .bounds import interval_arrays
from .core import GraphValidationError, Interval, Model, OverlapGraph, Provenance
from .propagation import DEFAULT_CHANGE_TOL, InfeasibleError, classical_lower_map, complete_and_tighten
from .witness import VERDICT_TOL, DimensionVerdict, classicality_check, dimension_witness

log = logging.getLogger("obound")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_FIRED = 3

MODELS = {"qudit": Model.PURE_QUDIT, "qubit": Model.QUBIT, "classical": Model.CLASSICAL}
DOC_FIELDS = {"n", "labels", "edges", "metadata"}
EDGE_FIELDS = {"i", "j", "value", "provenance"}


class DocumentError(ValueError):
    pass


def _vertex(raw, labels: list[str] | None, where: str) -> int:
    if isinstance(raw, bool):
        raise DocumentError(f"{where}: expected a vertex index or label, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str) and labels is not None and raw in labels:
        return labels.index(raw)
    raise DocumentError(f"{where}: unknown vertex {raw!r}")


def _value(raw, where: str):
    if isinstance(raw, bool):
        raise DocumentError(f"{where}: expected a number or [lo, hi], got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, list) and len(raw) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in raw):
        return (float(raw[0]), float(raw[1]))
    raise DocumentError(f"{where}: expected a number or [lo, hi], got {raw!r}")


def parse_document(text: str, source: str = "<input>") -> tuple[OverlapGraph, dict[str, str]]:
    """Parse a graph document into a validated graph and its metadata."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError(f"{source}: top level must be an object")
    for extra in sorted(set(doc) - DOC_FIELDS):
        log.warning("%s: ignoring unknown field %r", source, extra)

    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool):
        raise DocumentError(f"{source}: field 'n' must be an integer, got {n!r}")
    labels = doc.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or not all(isinstance(s, str) for s in labels):
            raise DocumentError(f"{source}: field 'labels' must be a list of strings")
        if len(labels) != n or len(set(labels)) != n:
            raise DocumentError(f"{source}: field 'labels' must hold {n} distinct names")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise DocumentError(f"{source}: field 'metadata' must be an object")
    metadata = {str(k): str(v) for k, v in metadata.items()}

    edges = doc.get("edges", [])
    if not isinstance(edges, list):
        raise DocumentError(f"{source}: field 'edges' must be a list")
    records = []
    for k, e in enumerate(edges):
        where = f"{source}: edges[{k}]"
        if not isinstance(e, dict):
            raise DocumentError(f"{where}: must be an object")
        for extra in sorted(set(e) - EDGE_FIELDS):
            log.warning("%s: ignoring unknown field %r", where, extra)
        for req in ("i", "j", "value"):
            if req not in e:
                raise DocumentError(f"{where}: missing field {req!r}")
        prov = e.get("provenance", "measured")
        try:
            prov = Provenance(prov)
        except ValueError:
            raise DocumentError(f"{where}.provenance: expected 'measured' or 'inferred', got {prov!r}") from None
        records.append((_vertex(e["i"], labels, f"{where}.i"), _vertex(e["j"], labels, f"{where}.j"),
                        _value(e["value"], f"{where}.value"), prov))
    try:
        g = OverlapGraph.from_edges(n, records, labels)
    except GraphValidationError as exc:
        raise DocumentError(f"{source}: " + "; ".join(str(i) for i in exc.issues)) from None
    return g, metadata


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _json_value(iv: Interval):
    return iv.lo if iv.is_exact else [iv.lo, iv.hi]


def graph_to_document(g: OverlapGraph, metadata: dict[str, str] | None = None) -> dict:
    doc: dict = {"n": g.n}
    if g.labels is not None:
        doc["labels"] = list(g.labels)
    doc["edges"] = [
        {"i": i, "j": j, "value": _json_value(e.value), "provenance": e.provenance.value}
        for (i, j), e in g.edges.items()
    ]
    doc["metadata"] = dict(metadata or {})
    return doc


def graph_to_csv(g: OverlapGraph) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "j", "lo", "hi", "provenance"])
    for (i, j), e in g.edges.items():
        w.writerow([i, j, repr(e.value.lo), repr(e.value.hi), e.provenance.value])
    return buf.getvalue()


def graph_to_dot(g: OverlapGraph) -> str:
    lines = ["graph overlaps {"]
    for v in range(g.n):
        lines.append(f'  "{g.label(v)}";')
    for (i, j), e in g.edges.items():
        iv = e.value
        label = f"{iv.lo:.6g}" if iv.is_exact else f"[{iv.lo:.6g}, {iv.hi:.6g}]"
        style = "solid" if e.measured else "dashed"
        lines.append(f'  "{g.label(i)}" -- "{g.label(j)}" [style={style}, label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def plot_grid_csv(model: Model, steps: int) -> str:
    x = np.linspace(0.0, 1.0, steps)
    xx, yy = np.meshgrid(x, x, indexing="ij")
    lo, hi = interval_arrays(xx, yy, model)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r_ab", "r_ac", "lo", "hi"])
    for row in zip(xx.ravel(), yy.ravel(), np.ravel(lo), np.ravel(hi)):
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _emit(text: str, path: str | None) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_infer(args) -> int:
    g, metadata = parse_document(_read(args.input), args.input)
    model = MODELS[args.model]
    if args.emit_plot_data:
        _emit(plot_grid_csv(model, args.plot_steps), args.emit_plot_data)
    if not g.edges:
        log.warning("no edges given; every pair is [0, 1]")
    try:
        result = complete_and_tighten(g, model, args.max_iters, args.tol)
    except InfeasibleError as exc:
        res = exc.result
        w = res.infeasible_witness
        doc = graph_to_document(res.complete, {**metadata, "model": args.model, "status": "infeasible"})
        doc["witness"] = {
            "pair": list(w.pair),
            "via": w.via,
            "labels": [g.label(w.pair[0]), g.label(w.pair[1]), g.label(w.via)],
            "current": [w.current.lo, w.current.hi],
            "implied": [w.implied.lo, w.implied.hi],
            "measured": w.measured,
        }
        log.error("infeasible: %s", exc)
        _emit(_dumps(doc), args.output)
        return EXIT_INFEASIBLE
    for msg in result.warnings:
        log.warning(msg)
    meta = {
        **metadata,
        "model": args.model,
        "status": "ok",
        "iterations": str(result.iterations),
        "converged": str(result.converged).lower(),
    }
    if args.format == "json":
        text = _dumps(graph_to_document(result.complete, meta))
    elif args.format == "csv":
        text = graph_to_csv(result.complete)
    else:
        text = graph_to_dot(result.complete)
    _emit(text, args.output)
    return EXIT_OK


def cmd_classical(args) -> int:
    g, _ = parse_document(_read(args.input), args.input)
    lower = classical_lower_map(g)
    verdict = classicality_check(g, tol=args.noise)
    report = {
        "lower_bounds": [{"i": i, "j": j, "lower": v} for (i, j), v in lower.items()],
        "verdict": verdict.name,
        "violations": [asdict(v) for v in verdict.violations],
    }
    _emit(_dumps(report), args.output)
    return EXIT_OK if verdict.classical else EXIT_FIRED


def cmd_witness_dim(args) -> int:
    vals = args.values if args.values else [args.r_ab, args.r_ac, args.r_bc]
    if any(v is None for v in vals) or len(vals) != 3:
        raise DocumentError("need three overlaps: r_ab r_ac r_bc")
    for v in vals:
        if not 0.0 <= v <= 1.0:
            raise DocumentError(f"overlap {v!r} outside [0, 1]")
    verdict = dimension_witness(*vals, tol=args.noise)
    print(verdict.value)
    return {
        DimensionVerdict.CONSISTENT_WITH_QUBITS: EXIT_OK,
        DimensionVerdict.REQUIRES_DIMENSION_AT_LEAST_3: EXIT_FIRED,
        DimensionVerdict.INFEASIBLE_FOR_PURE_STATES: EXIT_INFEASIBLE,
    }[verdict]


def cmd_verify(args) -> int:
    names = suites.SUITES if args.suite == "all" else (args.suite,)
    results = [suites.run(n, seed=args.seed, trials=args.trials, m=args.m) for n in names]
    summary = {
        "seed": args.seed,
        "passed": all(r.passed for r in results),
        "suites": [asdict(r) for r in results],
    }
    _emit(_dumps(summary), args.output)
    return EXIT_OK if summary["passed"] else EXIT_FIRED


def cmd_polytope(args) -> int:
    r = suites.polytope_suite([args.m])
    _emit(_dumps(asdict(r)), args.output)
    return EXIT_OK if r.passed else EXIT_FIRED


def _default_seed() -> int:
    raw = os.environ.get("OBOUND_SEED")
    try:
        return int(raw) if raw else 0
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="obound", description="Bounds on unknown pairwise state overlaps.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("infer", help="complete a graph of overlaps with inferred intervals")
    s.add_argument("input", help="graph document (JSON), or - for stdin")
    s.add_argument("--model", choices=sorted(MODELS), default="qudit")
    s.add_argument("--max-iters", type=int, default=None)
    s.add_argument("--tol", type=float, default=DEFAULT_CHANGE_TOL, help="fixpoint change tolerance")
    s.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    s.add_argument("-o", "--output", default=None)
    s.add_argument("--emit-plot-data", metavar="CSV", default=None,
                   help="write the model's (r_ab, r_ac, lo, hi) grid to CSV")
    s.add_argument("--plot-steps", type=int, default=101)
    s.set_defaults(func=cmd_infer)

    s = sub.add_parser("classical", help="chain lower bounds and classicality violations")
    s.add_argument("input")
    s.add_argument("--noise", type=float, default=VERDICT_TOL, help="violation tolerance")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_classical)

    s = sub.add_parser("witness-dim", help="qubit dimension witness for one triangle")
    s.add_argument("values", nargs="*", type=float, metavar="R", help="r_ab r_ac r_bc")
    s.add_argument("--r-ab", type=float)
    s.add_argument("--r-ac", type=float)
    s.add_argument("--r-bc", type=float)
    s.add_argument("--noise", type=float, default=VERDICT_TOL)
    s.set_defaults(func=cmd_witness_dim)

    s = sub.add_parser("verify", help="run oracle cross-checks")
    s.add_argument("--suite", choices=("all", *suites.SUITES), default="all")
    s.add_argument("--seed", type=int, default=_default_seed())
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--m", type=int, default=None, help="proposition count for the polytope suite")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("polytope", help="check the conjunction polytope inequalities")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_polytope)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="obound: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (DocumentError, OSError, ValueError) as exc:
        print(f"obound: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
