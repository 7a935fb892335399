"""Command-line front end: analyze / tile / verify.

Exit codes: 0 success, 1 usage or input errors, 2 infeasible exponent LP
(unbounded data reuse), 3 partial constraint closure under --strict,
4 a requested check was skipped for budget reasons.
"""

from __future__ import annotations

import argparse
import json
import sys

from .constraints import Completeness, DEFAULT_MAX_CLOSURE
from .lp import InfeasiblePrimalError
from .nestdsl import ParseError, parse_loop_nest
from .problem import DocumentError, ProblemDocument, document_from_json
from .report import analysis_report, report_to_json, report_to_text
from .tiler import DEFAULT_BUDGET, analyze, tiling_for
from .verifier import run_verification

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_STRICT_PARTIAL = 3
EXIT_BUDGET = 4


def load_document(path: str) -> ProblemDocument:
    """Problem document from a JSON file or the loop-nest DSL (sniffed)."""
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return document_from_json(json.loads(text))
        except json.JSONDecodeError as e:
            raise DocumentError(f"invalid JSON: {e}") from e
    return parse_loop_nest(text)


def run_analyze(doc: ProblemDocument, options) -> tuple[int, dict]:
    analysis = analyze(doc.to_problem(), options.max_closure)
    report = analysis_report(analysis)
    code = EXIT_OK
    if options.strict and analysis.constraints.completeness is Completeness.PARTIAL:
        code = EXIT_STRICT_PARTIAL
    return code, report


def run_tile(doc: ProblemDocument, memory: int, options) -> tuple[int, dict]:
    problem = doc.to_problem()
    analysis = analyze(problem, options.max_closure)
    tiling = tiling_for(problem, analysis.path, memory, analysis.decomposition)
    report = analysis_report(analysis, tiling=tiling)
    code = EXIT_OK
    if options.strict and analysis.constraints.completeness is Completeness.PARTIAL:
        code = EXIT_STRICT_PARTIAL
    return code, report


def run_verify(doc: ProblemDocument, memories, options) -> tuple[int, dict]:
    problem = doc.to_problem()
    analysis = analyze(problem, options.max_closure)
    tiling = tiling_for(problem, analysis.path, min(memories), analysis.decomposition)
    verification = run_verification(
        analysis,
        memories,
        window=options.window,
        budget=options.budget,
    )
    report = analysis_report(analysis, tiling=tiling, verification=verification)
    code = EXIT_OK
    if not verification.all_ok():
        code = EXIT_USAGE  # a failed certification is a hard error
    elif verification.notices and any("skipped" in n for n in verification.notices):
        code = EXIT_BUDGET
    if code == EXIT_OK and options.strict and analysis.constraints.completeness is Completeness.PARTIAL:
        code = EXIT_STRICT_PARTIAL
    return code, report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="commtile",
        description="Communication lower bounds and optimal tilings for "
        "dependence-free loop nests with linear array accesses.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="problem file: JSON document or loop-nest DSL ('-' for stdin)")
        p.add_argument("--max-closure", type=int, default=DEFAULT_MAX_CLOSURE,
                       help="cap on the kernel closure size (default %(default)s)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="point budget for brute-force checks (default %(default)s)")
        p.add_argument("--strict", action="store_true",
                       help="fail (exit 3) when the constraint list is only partial")
        p.add_argument("--format", choices=("json", "text"), default="json",
                       help="report format (default %(default)s)")

    pa = sub.add_parser("analyze", help="solve the exponent LP and derive the tile shape")
    common(pa)

    pt = sub.add_parser("tile", help="construct the tiling for a memory size")
    common(pt)
    pt.add_argument("--memory", "-M", type=int, required=True, help="memory parameter M")

    pv = sub.add_parser("verify", help="brute-force certification over a memory sweep")
    common(pv)
    pv.add_argument("--memory", "-M", type=int, action="append", required=True,
                    help="memory parameter (repeat for a sweep)")
    pv.add_argument("--window", type=int, default=None,
                    help="window radius for the exact-cover check")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    options = ap.parse_args(argv)
    try:
        doc = load_document(options.file)
    except (OSError, DocumentError, ParseError) as e:
        print(f"commtile: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if options.command == "analyze":
            code, report = run_analyze(doc, options)
        elif options.command == "tile":
            if options.memory < 1:
                print("commtile: --memory must be >= 1", file=sys.stderr)
                return EXIT_USAGE
            code, report = run_tile(doc, options.memory, options)
        else:
            if any(m < 1 for m in options.memory):
                print("commtile: --memory must be >= 1", file=sys.stderr)
                return EXIT_USAGE
            code, report = run_verify(doc, options.memory, options)
    except InfeasiblePrimalError as e:
        print(f"commtile: infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DocumentError as e:
        print(f"commtile: {e}", file=sys.stderr)
        return EXIT_USAGE

    if options.format == "json":
        sys.stdout.write(report_to_json(report))
    else:
        sys.stdout.write(report_to_text(report))
    if code == EXIT_STRICT_PARTIAL:
        print("commtile: constraint closure truncated (--strict)", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
