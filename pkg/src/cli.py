"""
cubeham command line.

    python -m src.cli extend --in matching.json [--avoid Z] [--long qd|kqd] [--dot out.dot]
    python -m src.cli oracle --in matching.json [--avoid V ...] [--max]
    python -m src.cli check-h --in matching.json [--avoid Z]
    python -m src.cli layers --in matching.json [--avoid X] [--kinds half near_half ...]
    python -m src.cli maximalize --in matching.json [--avoid Z] [--h]
    python -m src.cli shorten --in matching.json [--avoid Z]
    python -m src.cli hamlace --in matching.json [--x X --y Y] [--path]
    python -m src.cli gen --kind h_satisfying --d 6 --seed 7
    python -m src.cli suite lemma_bank --seed 1 [--count N] [--jobs J]

Exit codes: 0 success, 1 failed suite or construction, 2 expected negative
result, 3 search budget exhausted, 4 malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from src.config import FIXTURE_DIR, JOBS, LOG_LEVEL, NODE_BUDGET
from src.hypercube.certificates import CycleCertificate, LinearForestCertificate
from src.hypercube.constructors import extend_to_maximal, shorten_matching
from src.hypercube.core import (
    ConstructionError,
    DimensionError,
    MalformedMatchingError,
    Matching,
    PreconditionError,
    SearchBudgetExceeded,
)
from src.hypercube.documents import (
    CycleDocument,
    MatchingDocument,
    OracleDocument,
    PathDocument,
    TraceDocument,
    dump_json,
    load_matching,
    to_dot,
)
from src.hypercube.layers import KINDS as LAYER_KINDS, find_layers
from src.hypercube.property_h import check_property_h, make_h_maximal
from src.extender.hamlace import HalfLayerPresent, hamlace_cycle, hamlace_path
from src.extender.induction import HViolated, extend_avoiding, extend_to_cycle
from src.extender.long_cycles import long_cycle_kqd, long_cycle_qd
from src.extender.trace import CaseTrace
from src.harness.instances import KINDS, gen_instance
from src.harness.suites import SUITES, SuiteConfig, run_suite
from src.search.oracle import (
    SearchConfig,
    SearchOutcome,
    extend_linear_forest,
    extends,
    max_cycle_length,
)

logger = logging.getLogger("cubeham.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_NEGATIVE = 2
EXIT_BUDGET = 3
EXIT_MALFORMED = 4


# -----------------------------
# Output helpers
# -----------------------------
def _emit(args: argparse.Namespace, doc, text: Optional[str] = None) -> None:
    """Print the document (JSON) or its human form, and copy it to --out."""
    payload = dump_json(doc) if hasattr(doc, "model_dump") else json.dumps(
        doc, indent=2, sort_keys=True
    )
    if getattr(args, "out", None):
        Path(args.out).write_text(payload + "\n")
    if args.json or text is None:
        print(payload)
    else:
        print(text)


def _search_config(args: argparse.Namespace) -> SearchConfig:
    return SearchConfig(node_budget=args.budget, seed=args.seed)


def _default_avoid(m: Matching, given: Optional[int]) -> Optional[int]:
    if given is not None:
        return given
    marked = m.forbidden_vertices()
    return marked[0] if len(marked) == 1 else None


def _write_trace(path: Optional[str], trace: CaseTrace) -> None:
    """Write the case trace as a TraceDocument to `path`, when one was given."""
    if not path:
        return
    Path(path).write_text(dump_json(TraceDocument.from_trace(trace)) + "\n")
    logger.info("Case trace written to %s", path)


# -----------------------------
# Commands
# -----------------------------
def cmd_extend(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    cfg = _search_config(args)
    trace = CaseTrace()
    z = _default_avoid(m, args.avoid)

    if args.long == "qd":
        cert = long_cycle_qd(m, cfg, trace)
    elif args.long == "kqd":
        cert = long_cycle_kqd(m, cfg, trace)
    elif z is None:
        cert = extend_to_cycle(m, cfg, trace)
    elif m.d >= 5:
        result = extend_avoiding(m.edges_only(), z, cfg, trace)
        if isinstance(result, HViolated):
            _write_trace(args.trace, trace)
            print(f"❌ (H) fails for z={z} in direction {result.direction}; no cycle avoids z")
            return EXIT_NEGATIVE
        cert = result
    else:
        res = extends(m, cfg, avoid=[z])
        if res.outcome is SearchOutcome.BUDGET:
            return EXIT_BUDGET
        if not res.found:
            print(f"❌ No cycle through the matching avoids {z}")
            return EXIT_NEGATIVE
        cert = res.certificate

    _write_trace(args.trace, trace)
    if args.dot:
        Path(args.dot).write_text(to_dot(cert))
    doc = CycleDocument.from_certificate(cert)
    _emit(args, doc, f"✅ Cycle of length {len(cert)}: {list(cert.vertices)}")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    cfg = _search_config(args)
    avoid = args.avoid or []
    if args.max:
        res = max_cycle_length(m, cfg, avoid=avoid)
    elif m.terminal_vertices():
        res = extend_linear_forest(m, m.terminal_vertices(), cfg, avoid=avoid)
    else:
        res = extends(m, cfg, avoid=avoid)

    cert = res.certificate
    doc = OracleDocument(
        result=res.outcome.value,
        cycle=list(cert.vertices) if isinstance(cert, CycleCertificate) else None,
        paths=[list(p) for p in cert.paths] if isinstance(cert, LinearForestCertificate) else None,
        max_length=res.max_length,
        nodes=res.nodes,
    )
    _emit(args, doc, f"Oracle: {res.outcome.value} after {res.nodes} nodes"
          + (f", longest cycle {res.max_length}" if res.max_length is not None else ""))
    if res.outcome is SearchOutcome.BUDGET:
        return EXIT_BUDGET
    return EXIT_OK if res.outcome is SearchOutcome.YES else EXIT_NEGATIVE


def cmd_check_h(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    z = _default_avoid(m, args.avoid)
    z = 0 if z is None else z
    report = check_property_h(m.edges_only(), z)
    doc = {
        "z": z,
        "satisfied": report.satisfied,
        "violating_directions": sorted(w.direction for w in report.witnesses),
        "free_vertices": {str(i): vs for i, vs in sorted(report.free_vertices.items())},
    }
    verdict = "satisfies" if report.satisfied else "violates"
    _emit(args, doc, f"Matching {verdict} (H) for z={z}")
    return EXIT_OK if report.satisfied else EXIT_NEGATIVE


def cmd_layers(args: argparse.Namespace) -> int:
    m = load_matching(args.input).edges_only()
    patterns = find_layers(m, args.kinds, x=args.avoid)
    doc = {"d": m.d, "layers": [asdict(p) for p in patterns]}
    lines = [f"{len(patterns)} layer pattern(s)"]
    for p in patterns:
        where = f" in Q^{p.side[0]}_{p.side[1]}" if p.side else ""
        lines.append(f"  {p.kind} direction {p.direction} class {p.parity_class}{where}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_OK


def cmd_maximalize(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    z = _default_avoid(m, args.avoid)
    if args.h:
        out = make_h_maximal(m.edges_only(), 0 if z is None else z)
    else:
        out = extend_to_maximal(m.edges_only(), [] if z is None else [z], args.long_edges)
    doc = MatchingDocument(d=out.d, edges=out.edges(), forbidden=[] if z is None else [z])
    _emit(args, doc, f"Maximal matching with {len(out)} edges")
    return EXIT_OK


def cmd_shorten(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    z = _default_avoid(m, args.avoid)
    out = shorten_matching(m.edges_only(), [] if z is None else [z])
    doc = MatchingDocument(d=out.d, edges=out.edges(), forbidden=[] if z is None else [z])
    _emit(args, doc, f"Shortened matching with {len(out)} edges")
    return EXIT_OK


def cmd_hamlace(args: argparse.Namespace) -> int:
    m = load_matching(args.input)
    x, y = args.x, args.y
    if x is None or y is None:
        marked = m.forbidden_vertices() or m.uncovered_vertices()
        if len(marked) != 2:
            raise PreconditionError("give --x and --y, or mark exactly two vertices forbidden")
        x, y = marked
    cfg = _search_config(args)
    trace = CaseTrace()
    if args.path:
        result = hamlace_path(m.edges_only(), x, y, cfg, trace)
    else:
        result = hamlace_cycle(m.edges_only(), x, y, cfg, trace)
    _write_trace(args.trace, trace)
    if isinstance(result, HalfLayerPresent):
        print(f"❌ Half-layers in directions {result.directions}; no extension exists")
        return EXIT_NEGATIVE
    if args.dot:
        Path(args.dot).write_text(to_dot(result))
    if args.path:
        doc = PathDocument.from_certificate(result)
        text = f"✅ Hamilton path from {x} to {y}: {result.paths[0]}"
    else:
        doc = CycleDocument.from_certificate(result)
        text = f"✅ Cycle of length {len(result)} avoiding {x} and {y}"
    _emit(args, doc, text)
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    inst = gen_instance(args.kind, args.d, args.seed, args.index)
    _emit(args, inst.document())
    return EXIT_OK


def cmd_suite(args: argparse.Namespace) -> int:
    cfg = SuiteConfig(
        name=args.name,
        seed=args.seed,
        count=args.count,
        dims=tuple(args.dims) if args.dims else None,
        jobs=args.jobs,
        node_budget=args.budget,
        fixture_dir=Path(args.fixture_dir),
        write_fixtures=not args.no_fixtures,
    )
    report = run_suite(cfg)
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
    print(report.to_json() if args.json else report.summary())
    if report.failed:
        return EXIT_FAILED
    return EXIT_BUDGET if report.budget_exhausted else EXIT_OK


# -----------------------------
# Parser
# -----------------------------
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubeham", description="Extend matchings of hypercubes to cycles"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for search order and sampling")
    common.add_argument("--budget", type=int, default=NODE_BUDGET, help="oracle node budget")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--out", help="also write the JSON result to this file")

    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--in", dest="input", required=True, help="matching JSON file")
        return p

    p = with_input("extend", "extend a matching to a cycle")
    p.add_argument("--avoid", type=int, help="vertex the cycle must miss")
    p.add_argument("--long", choices=["qd", "kqd"], help="long cycle through a maximal extension")
    p.add_argument("--trace", metavar="TRACE_JSON", help="write the case trace to this file")
    p.add_argument("--dot", help="write the certificate as Graphviz DOT")
    p.set_defaults(func=cmd_extend)

    p = with_input("oracle", "exact search for an extension")
    p.add_argument("--avoid", type=int, nargs="*", help="vertices the cycle must miss")
    p.add_argument("--max", action="store_true", help="longest extending cycle")
    p.set_defaults(func=cmd_oracle)

    p = with_input("check-h", "check property (H)")
    p.add_argument("--avoid", type=int, help="the vertex z (default: the forbidden vertex or 0)")
    p.set_defaults(func=cmd_check_h)

    p = with_input("layers", "list (near) half- and quad-layers")
    p.add_argument("--avoid", type=int, help="flag patterns dangerous for this vertex")
    p.add_argument("--kinds", nargs="*", choices=LAYER_KINDS, help="layer kinds to report")
    p.set_defaults(func=cmd_layers)

    p = with_input("maximalize", "grow to a maximal or H-maximal matching")
    p.add_argument("--avoid", type=int, help="vertex left uncovered")
    p.add_argument("--h", action="store_true", help="H-maximal growth keeping (H)")
    p.add_argument("--long-edges", action="store_true", help="pair leftovers with long edges")
    p.set_defaults(func=cmd_maximalize)

    p = with_input("shorten", "replace long edges by cube edges")
    p.add_argument("--avoid", type=int, help="vertex left uncovered")
    p.set_defaults(func=cmd_shorten)

    p = with_input("hamlace", "laceability cycle or Hamilton path")
    p.add_argument("--x", type=int, help="first end (default: from the input)")
    p.add_argument("--y", type=int, help="second end (default: from the input)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--path", action="store_true", help="Hamilton path from x to y")
    mode.add_argument("--cycle", action="store_true", help="cycle avoiding x and y (default)")
    p.add_argument("--trace", metavar="TRACE_JSON", help="write the case trace to this file")
    p.add_argument("--dot", help="write the certificate as Graphviz DOT")
    p.set_defaults(func=cmd_hamlace)

    p = sub.add_parser("gen", parents=[common], help="generate a seeded instance")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--index", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", parents=[common], help="run a verification suite")
    p.add_argument("name", choices=SUITES)
    p.add_argument("--count", type=int, help="instances per dimension")
    p.add_argument("--dims", type=int, nargs="*", help="dimensions to sample")
    p.add_argument("--jobs", type=int, default=JOBS, help="worker processes")
    p.add_argument("--fixture-dir", default=str(FIXTURE_DIR))
    p.add_argument("--no-fixtures", action="store_true", help="do not write fixtures")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.WARNING),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DimensionError, MalformedMatchingError, PreconditionError,
            FileNotFoundError, ValueError) as exc:
        print(f"❌ Invalid input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except SearchBudgetExceeded as exc:
        print(f"❌ Search budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConstructionError as exc:
        logger.error("Construction failed: %s; trace: %s", exc, exc.trace)
        if isinstance(exc.trace, CaseTrace):
            _write_trace(getattr(args, "trace", None), exc.trace)
        print(f"❌ Construction failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
