"""Command-line surface.

Subcommands: classify, hodge, pi1, breakdown, verify-paper.  Exit codes:
0 success, 1 verification failure, 2 usage error, 3 semantic input error
(for example a generator set that does not surject onto the multiplicative
part).  All output is deterministic; --out writes the same bytes to a file
instead of stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .cohomology import chen_ruan_diamond, contribution_breakdown
from .errors import InputError
from .golden import parse_group_literal
from .moves import classify_with_report
from .pi1 import FiniteAbelianGroup, fundamental_group
from .verify import _classification_payload, run_verification
from .vw_group import Subgroup, closure, is_admissible

USAGE_ERROR = 2
SEMANTIC_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vworbifold",
        description="Exact classification and orbifold cohomology of three-torus quotients.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, gens=False):
        p.add_argument("--n", type=int, choices=(3, 4, 6), required=True, help="curve order")
        if gens:
            p.add_argument(
                "--gens",
                required=True,
                help="generators 'm1,m2,m3;a1,a2,a3' joined by '|'",
            )
        p.add_argument("--format", choices=("json", "csv", "md"), default="json")
        p.add_argument("--out", help="write output to this path instead of stdout")

    add_common(sub.add_parser("classify", help="list the homeomorphism classes for one order"))
    add_common(sub.add_parser("hodge", help="orbifold Hodge numbers of one quotient"), gens=True)
    add_common(sub.add_parser("pi1", help="fundamental group of one quotient"), gens=True)
    add_common(sub.add_parser("breakdown", help="per-element contribution list of one quotient"), gens=True)

    v = sub.add_parser("verify-paper", help="check every reference table against the computation")
    v.add_argument("--n", type=int, choices=(3, 4, 6), action="append", dest="ns",
                   help="restrict to one curve order (repeatable; default: all)")
    v.add_argument("--strict", action="store_true",
                   help="fail unless the disputed rows were adjudicated in this run")
    v.add_argument("--format", choices=("json", "csv", "md"), default="json")
    v.add_argument("--out", help="write the report to this path instead of stdout")
    v.add_argument("--data-dir", help="override the packaged reference tables (testing hook)")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2, sort_keys=True) + "\n"
    if not rows:
        return "\n"
    headers = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=headers, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()
    widths = {h: max(len(h), *(len(str(r[h])) for r in rows)) for h in headers}
    lines = [
        "| " + " | ".join(h.ljust(widths[h]) for h in headers) + " |",
        "|" + "|".join("-" * (widths[h] + 2) for h in headers) + "|",
    ]
    lines += ["| " + " | ".join(str(r[h]).ljust(widths[h]) for h in headers) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def _group_from_args(args) -> Subgroup:
    gens = parse_group_literal(args.n, args.gens)
    group = closure(args.n, gens)
    if not is_admissible(group):
        raise _Semantic("group does not surject onto multiplicative part")
    return group


class _Semantic(Exception):
    pass


def _pi1_text(pi1: FiniteAbelianGroup) -> str:
    return str(pi1)


def _cmd_classify(args) -> int:
    report = classify_with_report(args.n)
    rows = _classification_payload(report)["classes"]
    if args.format != "json":
        rows = [
            {**r, "pi1": " x ".join(f"Z/{d}" for d in r["pi1"]) or "1"}
            for r in rows
        ]
    _emit(_render_table(rows, args.format), args.out)
    return 0


def _cmd_hodge(args) -> int:
    group = _group_from_args(args)
    h11, h12 = chen_ruan_diamond(group).hodge_pair
    _emit(_render_table([{"h11": h11, "h12": h12}], args.format), args.out)
    return 0


def _cmd_pi1(args) -> int:
    group = _group_from_args(args)
    pi1 = fundamental_group(group)
    if args.format == "json":
        payload = {"invariant_factors": list(pi1.factors), "order": pi1.order, "name": str(pi1)}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(_render_table([{"pi1": str(pi1), "order": pi1.order}], args.format), args.out)
    return 0


def _cmd_breakdown(args) -> int:
    group = _group_from_args(args)
    rows = []
    for entry in contribution_breakdown(group):
        row = {"element": str(entry.element)[1:-1], "h11": entry.h11, "h12": entry.h12}
        if group.n == 6:
            row["orbit_size"] = entry.orbit_size
        rows.append(row)
    _emit(_render_table(rows, args.format), args.out)
    return 0


def _cmd_verify(args) -> int:
    ns = tuple(sorted(set(args.ns))) if args.ns else (3, 4, 6)
    report = run_verification(ns=ns, strict=args.strict, data_base=args.data_dir)
    if args.format == "json":
        text = json.dumps(report.payload, indent=2, sort_keys=True) + "\n"
    elif args.format == "csv":
        text = _render_table(report.payload["table_rows"], "csv")
    else:
        text = _verify_markdown(report.payload)
    _emit(text, args.out)
    return report.exit_code


def _verify_markdown(payload: dict) -> str:
    lines = ["# Reference-table verification", ""]
    lines.append(f"Curve orders: {payload['n_values']}; exit code {payload['exit_code']}.")
    lines.append("")
    lines.append("## Class rows")
    lines.append("")
    rows = [
        {
            "case": r["case_id"],
            "expected": tuple(r["expected"]),
            "computed": tuple(r["computed"]),
            "pi1": f"{r['computed_pi1_order']} (expected {r['expected_pi1_order']})",
            "verdict": r["verdict"],
        }
        for r in payload["table_rows"]
    ]
    lines.append(_render_table(rows, "md").rstrip("\n"))
    lines.append("")
    lines.append("## Per-element lists")
    lines.append("")
    for b in payload["breakdowns"]:
        lines.append(f"* {b['case_id']}: {b['verdict']} ({b['entries']} reference entries)")
        for m in b["mismatches"]:
            lines.append(f"    * {m}")
    lines.append("")
    lines.append("## Disputed rows")
    lines.append("")
    for d in payload["disputed"]:
        lines.append(
            f"* {d['case_id']}: computed {tuple(d['computed'])}; table figure {tuple(d['table_figure'])}, "
            f"list total {tuple(d['list_total'])}; matches: {', '.join(d['matches'])}"
        )
    lines.append("")
    lines.append("## Classification notes")
    lines.append("")
    for n, section in sorted(payload["classification"].items()):
        lines.append(f"* order {n}: {section['class_count']} classes over {section['total_subgroups']} subgroups")
        for note in section["notes"]:
            lines.append(f"    * {note}")
    if payload["firm_failures"]:
        lines.append("")
        lines.append("## Firm failures")
        lines.append("")
        lines.extend(f"* {f}" for f in payload["firm_failures"])
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "classify": _cmd_classify,
    "hodge": _cmd_hodge,
    "pi1": _cmd_pi1,
    "breakdown": _cmd_breakdown,
    "verify-paper": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except _Semantic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return SEMANTIC_ERROR
    except InputError as exc:
        message = str(exc)
        print(f"error: {message}", file=sys.stderr)
        syntax = "must look like" in message or "non-integer" in message or "no generators" in message
        return USAGE_ERROR if syntax else SEMANTIC_ERROR


if __name__ == "__main__":
    sys.exit(main())
