"""Reading and writing Lie algebras in Salamon notation.

``(0, 0, 4/7 e12, sqrt3/6 e14 - 2/7 e24)`` lists ``de^1, ..., de^n``; the
term ``C e^{ij}`` in ``de^k`` means ``[e_i, e_j] = -C e_k``. Coefficients
may be written ``14/51 sqrt3``, ``sqrt(143127/290950)``, ``-√3/6`` and so
on. Single-digit indices may be run together (``e12``); otherwise use
``e^{1,10}``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .exactnum import ONE, ZERO, RadExt, format_radext, rad_sqrt_of_rational

_SQRT = r"(?:sqrt|√)\s*(?:\(\s*(?P<rad>\d+(?:/\d+)?)\s*\)|(?P<radbare>\d+))"
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*"
    r"(?P<num>\d+(?:\s*/\s*\d+)?)?\s*\*?\s*"
    r"(?:" + _SQRT + r")?\s*"
    r"(?:/\s*(?P<den>\d+))?\s*\*?\s*"
    r"e\s*\^?\s*(?:\{(?P<braced>[\d,\s]+)\}|(?P<digits>\d+))\s*"
)


class NotationError(ValueError):
    pass


def parse_number(text: str) -> RadExt:
    """A coefficient such as ``-14/51 sqrt3``, ``sqrt(2/3)`` or ``3``."""
    m = re.fullmatch(
        r"\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\s*/\s*\d+)?)?\s*\*?\s*(?:" + _SQRT + r")?\s*(?:/\s*(?P<den>\d+))?\s*",
        text)
    if not m or not (m["num"] or m["rad"] or m["radbare"]):
        raise NotationError(f"cannot parse number {text!r}")
    return _coefficient(m)


def _coefficient(m: re.Match) -> RadExt:
    q = Fraction(m["num"].replace(" ", "")) if m["num"] else Fraction(1)
    rad = m["rad"] or m["radbare"]
    val = RadExt.coerce(q) if rad is None else rad_sqrt_of_rational(Fraction(rad)) * q
    if m["den"]:
        val = val / int(m["den"])
    return -val if m["sign"] == "-" else val


def _indices(m: re.Match) -> tuple[int, int]:
    if m["braced"] is not None:
        parts = [p for p in re.split(r"[,\s]+", m["braced"].strip()) if p]
        if len(parts) == 1 and len(parts[0]) == 2:
            parts = list(parts[0])
    else:
        parts = list(m["digits"])
    if len(parts) != 2:
        raise NotationError(f"expected two indices in {m.group(0).strip()!r}")
    return int(parts[0]), int(parts[1])


def _split_components(text: str) -> list[str]:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return [c.strip() for c in text.split(",")] if "{" not in text else _split_outside_braces(text)


def _split_outside_braces(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return out


def parse_salamon(text: str, n: int | None = None) -> dict[tuple[int, int], dict[int, RadExt]]:
    """Brackets ``{(i, j): {k: value}}`` (0-based, ``i < j``) from a Salamon string.

    Missing trailing components are read as zero when ``n`` is given.
    """
    comps = _split_components(text)
    if n is not None:
        if len(comps) > n:
            raise NotationError(f"{len(comps)} components for dimension {n}")
        comps += ["0"] * (n - len(comps))
    brackets: dict[tuple[int, int], dict[int, RadExt]] = {}
    for k, comp in enumerate(comps):
        if comp in ("0", ""):
            continue
        pos = 0
        while pos < len(comp):
            m = _TERM.match(comp, pos)
            if not m or m.end() == pos:
                raise NotationError(f"cannot parse {comp[pos:]!r}")
            if pos > 0 and not m["sign"]:
                raise NotationError(f"missing sign between terms in {comp!r}")
            coeff = _coefficient(m)
            i, j = _indices(m)
            if i == j:
                raise NotationError(f"e^{{{i}{j}}} is zero")
            if i > j:
                i, j, coeff = j, i, -coeff
            slot = brackets.setdefault((i - 1, j - 1), {})
            slot[k] = slot.get(k, ZERO) - coeff
            pos = m.end()
    return {key: {k: v for k, v in out.items() if v} for key, out in brackets.items()}


def format_salamon(C, style: str = "ascii") -> str:
    """Inverse of :func:`parse_salamon` for a dense 0-based structure tensor."""
    n = len(C)
    comps = []
    for k in range(n):
        terms = []
        for i in range(n):
            for j in range(i + 1, n):
                v = -C[i][j][k]
                if not v:
                    continue
                idx = f"{i + 1}{j + 1}" if n < 10 else f"^{{{i + 1},{j + 1}}}"
                for m, q in sorted(v.terms.items()):
                    part = RadExt({m: q})
                    if part == ONE:
                        s = ""
                    elif part == -ONE:
                        s = "-"
                    else:
                        s = format_radext(part, style) + " "
                    terms.append(f"{s}e{idx}")
        comps.append(" + ".join(terms).replace("+ -", "- ") if terms else "0")
    return "(" + ", ".join(comps) + ")"


def parse_metric(signs: str | Sequence, n: int | None = None) -> tuple[int, ...]:
    """``"+--+"``, ``[1, -1, -1, 1]`` or a timelike index string ``"23"`` (requires ``n``)."""
    if isinstance(signs, str):
        s = signs.strip()
        if s and set(s) <= set("+-"):
            return tuple(1 if ch == "+" else -1 for ch in s)
        if n is None:
            raise NotationError("timelike index strings need the dimension")
        neg = {int(ch) for ch in s if ch.isdigit()}
        return tuple(-1 if i in neg else 1 for i in range(1, n + 1))
    return tuple(int(x) for x in signs)
