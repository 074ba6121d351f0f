"""Command line interface: ``solvclass classify | verify | curvature``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from itertools import combinations
from pathlib import Path
from typing import Sequence

from .classify import (ClassificationReport, ClassRow, Options, SolutionRecord, einstein_constant,
                       run_algorithm1, verify_record)
from .diagram import DiagramError, NiceDiagram, enumerate_diagrams, validate
from .exactnum import format_radext
from .geometry import MetricLieAlgebra, compare_invariants, curvature_invariants, extend
from .notation import NotationError, format_salamon, parse_metric, parse_salamon

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNRESOLVED = 0, 1, 2, 3


class InputError(Exception):
    pass


# -- formatting -----------------------------------------------------------------

def _frac(x) -> str:
    return str(x)


def format_derivation(rec: SolutionRecord, style: str = "unicode") -> str:
    diag = "(" + ", ".join(_frac(x) for x in rec.lam) + ")"
    tensor = "⊗" if style == "unicode" else "*"
    terms = []
    for (i, j), v in zip(rec.pairs, rec.a):
        s = format_radext(v, style)
        sign, body = ("-", s[1:]) if s.startswith("-") else ("+", s)
        terms.append(f" {sign} {body} e{i}{tensor}e{j}")
    return diag + "".join(terms)


def format_row(row: ClassRow) -> list[str]:
    rec = row.rep
    L = rec.algebra()
    return [
        " ".join(f"{i}{j}>{k}" for i, j, k in rec.diagram.classes) or "abelian",
        format_salamon(L.C, "unicode")[1:-1],
        format_derivation(rec),
        "{" + ", ".join(row.signatures) + "}",
    ]


def render_text(report: ClassificationReport) -> str:
    out = io.StringIO()
    by_n: dict[int, list[ClassRow]] = {}
    for row in report.rows:
        by_n.setdefault(row.rep.diagram.n, []).append(row)
    for n in sorted(by_n):
        out.write(f"# n = {n}: {len(by_n[n])} classes\n")
        for row in by_n[n]:
            out.write(" | ".join(format_row(row)) + "\n")
    if not report.rows:
        out.write("# no nondiagonal solutions\n")
    counts: dict[str, int] = {}
    for r in report.rejections:
        counts[r.reason] = counts.get(r.reason, 0) + 1
    if counts:
        out.write("# rejected: " + ", ".join(f"{k} x{v}" for k, v in sorted(counts.items())) + "\n")
    for r in report.unresolved:
        out.write(f"# unresolved: {r.diagram} A={list(r.pairs)} {r.reason} {r.detail}".rstrip() + "\n")
    for rec, msgs in report.verification_failures:
        out.write(f"# VERIFICATION FAILED: {rec.diagram} A={list(rec.pairs)}: {'; '.join(msgs)}\n")
    return out.getvalue()


def render_csv(report: ClassificationReport) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["row", "n", "arrows", "pairs", "lambda", "A", "X", "c", "a", "timelike"])
    for idx, row in enumerate(report.rows):
        for rec in row.records:
            w.writerow([
                idx, rec.diagram.n,
                " ".join(f"{i}{j}>{k}" for i, j, k in rec.diagram.classes),
                " ".join(f"{i},{j}" for i, j in rec.pairs),
                " ".join(map(str, rec.lam)), " ".join(map(str, rec.A)), " ".join(map(str, rec.X)),
                " ".join(format_radext(v, "ascii").replace(" ", "") for v in rec.c),
                " ".join(format_radext(v, "ascii").replace(" ", "") for v in rec.a),
                rec.timelike,
            ])
    return out.getvalue()


def render_json(report: ClassificationReport) -> str:
    data = report.to_json()
    data["summary"] = {
        "classes": len(report.rows),
        "records": len(report.records),
        "rejections": len(report.rejections),
        "unresolved": len(report.unresolved),
        "verification_failures": len(report.verification_failures),
    }
    return json.dumps(data, indent=1, sort_keys=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------

def _load_diagrams(paths: Sequence[str]) -> list[NiceDiagram]:
    out = []
    errors = []
    for p in paths:
        try:
            d = NiceDiagram.from_json(Path(p))
        except (OSError, json.JSONDecodeError, DiagramError) as exc:
            errors.append(f"{p}: {exc}")
            continue
        msg = validate(d)
        if msg:
            errors.append(f"{p}: not a nice diagram ({msg})")
            continue
        out.append(d)
    if errors:
        raise InputError("\n".join(errors))
    return out


def cmd_classify(args) -> int:
    if args.diagram:
        diagrams = _load_diagrams(args.diagram)
    else:
        bad = [n for n in args.dim if not 1 <= n <= 5]
        if bad:
            raise InputError(f"built-in enumeration covers 1 <= n <= 5 (got {bad}); pass --diagram files")
        diagrams = [d for n in args.dim for d in enumerate_diagrams(n)]
    opts = Options(require_surjective=args.require_surjective, require_unique_A=args.require_unique_A,
                   verify=not args.no_verify)
    report = run_algorithm1(diagrams, opts, threads=args.threads)
    render = {"text": render_text, "json": render_json, "csv": render_csv}[args.format]
    _emit(render(report), args.output)
    if report.verification_failures:
        return EXIT_VERIFY
    if args.strict and report.unresolved:
        return EXIT_UNRESOLVED
    return EXIT_OK


def _records_from_json(data) -> list[SolutionRecord]:
    if isinstance(data, list):
        return [r for item in data for r in _records_from_json(item)]
    if "rows" in data:
        return [SolutionRecord.from_json(r) for row in data["rows"] for r in row["records"]]
    if "records" in data:
        return [SolutionRecord.from_json(r) for r in data["records"]]
    return [SolutionRecord.from_json(data)]


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_verify(args) -> int:
    status = EXIT_OK
    for path in args.records:
        try:
            recs = _records_from_json(_read_json(path))
        except (KeyError, TypeError, ValueError, DiagramError) as exc:
            raise InputError(f"{path}: malformed record ({exc})") from exc
        for idx, rec in enumerate(recs):
            bad = verify_record(rec)
            tag = f"{path}[{idx}]" if len(recs) > 1 else path
            if bad:
                status = EXIT_VERIFY
                print(f"{tag}: FAIL: " + "; ".join(bad))
            else:
                print(f"{tag}: ok, Einstein constant {einstein_constant(rec)} (timelike {rec.timelike})")
    return status


def _algebras_from_file(path: str) -> list[tuple[str, MetricLieAlgebra]]:
    p = Path(path)
    text = p.read_text() if p.exists() else None
    if text is None:
        raise InputError(f"{path}: no such file")
    if text.lstrip().startswith(("{", "[")):
        data = json.loads(text)
        if isinstance(data, dict) and "brackets" in data:
            n = data.get("n") or len(parse_salamon_components(data["brackets"]))
            L = MetricLieAlgebra.from_brackets(n, parse_salamon(data["brackets"], n),
                                               parse_metric(data.get("metric", "+" * n), n))
            return [(path, L)]
        recs = _records_from_json(data)
        return [(f"{path}[{i}]" if len(recs) > 1 else path, extend(r.algebra(), r.derivation()))
                for i, r in enumerate(recs)]
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        n = len(parse_salamon_components(fields[0]))
        metric = fields[1].split()[0] if len(fields) > 1 and fields[1] else "+" * n
        L = MetricLieAlgebra.from_brackets(n, parse_salamon(fields[0], n), parse_metric(metric, n))
        out.append((f"{path}:{lineno}", L))
    return out


def parse_salamon_components(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return text.split(",")


def cmd_curvature(args) -> int:
    items = []
    for path in args.inputs:
        try:
            items += _algebras_from_file(path)
        except (NotationError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    reports = []
    for name, L in items:
        rep = curvature_invariants(L)
        reports.append((name, rep))
    if args.format == "json":
        data = {"reports": [{"input": n, **r.to_json()} for n, r in reports]}
        if len(reports) > 1:
            data["comparison"] = [
                {"a": a[0], "b": b[0], "verdict": compare_invariants(a[1], b[1])}
                for a, b in combinations(reports, 2) if a[1].normalized and b[1].normalized]
        _emit(json.dumps(data, indent=1) + "\n", args.output)
        return EXIT_OK
    out = io.StringIO()
    for name, rep in reports:
        chi = " ".join(format_radext(c) for c in rep.char_poly_normalized)
        a2 = format_radext(rep.a2) if rep.a2 is not None else "n/a (trace zero)"
        out.write(f"{name}: a2 = {a2}; diagonalizable = {'yes' if rep.diagonalizable else 'no'}; "
                  f"char poly coefficients = [{chi}]\n")
    if len(reports) > 1:
        out.write("# pairwise comparison\n")
        for a, b in combinations(reports, 2):
            if a[1].normalized and b[1].normalized:
                out.write(f"{a[0]} vs {b[0]}: {compare_invariants(a[1], b[1])}\n")
    _emit(out.getvalue(), args.output)
    return EXIT_OK


# -- entry point -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="solvclass", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify nondiagonal solutions")
    src = c.add_mutually_exclusive_group(required=True)
    src.add_argument("--dim", type=int, nargs="+", help="enumerate nice diagrams with this many nodes (<= 5)")
    src.add_argument("--diagram", nargs="+", metavar="FILE", help="diagram JSON files")
    c.add_argument("--require-surjective", action="store_true", help="skip diagrams whose root matrix is not onto")
    c.add_argument("--require-unique-A", action="store_true",
                   help="only index sets whose trace conditions are independent")
    c.add_argument("--format", choices=("text", "json", "csv"), default="text")
    c.add_argument("--output", "-o")
    c.add_argument("--threads", type=int, default=None, help="worker processes (default: $SOLVCLASS_THREADS or 1)")
    c.add_argument("--strict", action="store_true", help="exit with status 3 if any branch is unresolved")
    c.add_argument("--no-verify", action="store_true", help="skip the curvature re-verification of records")
    c.set_defaults(func=cmd_classify)

    v = sub.add_parser("verify", help="re-verify solution records")
    v.add_argument("records", nargs="+", metavar="FILE")
    v.set_defaults(func=cmd_verify)

    k = sub.add_parser("curvature", help="curvature invariants of Einstein extensions")
    k.add_argument("inputs", nargs="+", metavar="FILE")
    k.add_argument("--format", choices=("text", "json"), default="text")
    k.add_argument("--output", "-o")
    k.set_defaults(func=cmd_curvature)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"solvclass: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
