"""Loader for the reference classification tables stored under ``tests/data``."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from solvclass.classify import SolutionRecord
from solvclass.diagram import NiceDiagram
from solvclass.exactnum import RadExt
from solvclass.notation import parse_metric, parse_number, parse_salamon

DATA = Path(__file__).parent / "data"


def load_table(name: str) -> list[tuple[str, list[SolutionRecord]]]:
    """Rows as ``(label, records)``; ``A`` and ``X`` are left empty."""
    rows = []
    for line in (DATA / name).read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        label, brackets, diag, off, sigs = (f.strip() for f in line.split("|"))
        lam = tuple(Fraction(x) for x in diag.split(","))
        n = len(lam)
        br = parse_salamon(brackets, n)
        classes, c = [], []
        for (i, j), out in sorted(br.items()):
            ((k, v),) = out.items()
            classes.append((i + 1, j + 1, k + 1))
        d = NiceDiagram.from_classes(n, classes)
        by_class = {(i + 1, j + 1): out for (i, j), out in br.items()}
        c = tuple(next(iter(by_class[(i, j)].values())) for i, j, _ in d.classes)
        entries = {}
        for term in off.split(";"):
            pair, val = term.split("=")
            i, j = (int(x) for x in pair.split(","))
            entries[(i, j)] = parse_number(val)
        pairs = tuple(sorted(entries))
        recs = [SolutionRecord(d, pairs, lam, (Fraction(0),) * len(pairs), (), c,
                               tuple(entries[p] for p in pairs), parse_metric(s, n))
                for s in sigs.split()]
        rows.append((label, recs))
    return rows


def as_radext(x) -> RadExt:
    return RadExt.coerce(x)
