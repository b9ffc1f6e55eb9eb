"""Command line interface.

    koszul analyze FILE [--max-degree N] [--checks a,b,c] [--format text|machine] [--out PATH]

Exit codes: 0 when the analysis completes (verdicts, pass or fail, live in
the report), 1 on a parse error, 2 on an internal inconsistency (two
routes that must agree exactly disagreed).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .errors import InternalInconsistency, SpecError
from .report import ALL_CHECKS, emit_report, run_analysis
from .specfile import parse_spec


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koszul",
        description=(
            "Exact-arithmetic analysis of quadratic and nonhomogeneous "
            "quadratic algebras presented by generators and relations."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    analyze = sub.add_parser("analyze", help="analyze an algebra spec file")
    analyze.add_argument("file", help="path to the spec file")
    analyze.add_argument(
        "--max-degree",
        type=int,
        default=None,
        metavar="N",
        help="degree bound for all graded computations (overrides the spec's options)",
    )
    analyze.add_argument(
        "--checks",
        default=None,
        metavar="LIST",
        help="comma-separated checks to run; default: all applicable. "
        f"Known: {','.join(ALL_CHECKS)}",
    )
    analyze.add_argument(
        "--format",
        choices=("text", "machine"),
        default="text",
        help="report format (machine = stable-ordered JSON)",
    )
    analyze.add_argument(
        "--out", default=None, metavar="PATH", help="write the report to a file"
    )
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc}", file=sys.stderr)
        return 1
    try:
        spec = parse_spec(text)
    except SpecError as exc:
        print(f"{args.file}: parse error: {exc}", file=sys.stderr)
        return 1
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    try:
        report = run_analysis(spec, checks, args.max_degree)
    except SpecError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    except InternalInconsistency as exc:
        print(f"{args.file}: internal inconsistency: {exc}", file=sys.stderr)
        return 2
    rendered = emit_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return 0


if __name__ == "__main__":
    sys.exit(main())
