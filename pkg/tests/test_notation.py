from __future__ import annotations

from fractions import Fraction as F

import pytest

from solvclass.exactnum import RadExt
from solvclass.geometry import MetricLieAlgebra
from solvclass.notation import NotationError, format_salamon, parse_metric, parse_number, parse_salamon

S3 = RadExt.sqrt(3)


@pytest.mark.parametrize("text, value", [
    ("3", RadExt.coerce(3)),
    ("-14/51 sqrt3", F(-14, 51) * S3),
    ("sqrt(2/3)", RadExt.sqrt(6) / 3),
    ("-√3/6", -S3 / 6),
    ("7/51 sqrt(66)", F(7, 51) * RadExt.sqrt(66)),
])
def test_parse_number(text: str, value: RadExt) -> None:
    assert parse_number(text) == value


def test_parse_number_rejects_garbage() -> None:
    with pytest.raises(NotationError):
        parse_number("sqrt")


def test_parse_salamon_sign_convention() -> None:
    br = parse_salamon("(0, 0, 4/7 e12, sqrt3/6 e14 - 2/7 e24)")
    assert br[(0, 1)] == {2: RadExt.coerce(F(-4, 7))}
    assert br[(0, 3)] == {3: -S3 / 6}
    assert br[(1, 3)] == {3: RadExt.coerce(F(2, 7))}


def test_parse_salamon_reversed_indices_and_braces() -> None:
    assert parse_salamon("0,0,e21") == {(0, 1): {2: RadExt.coerce(1)}}
    br = parse_salamon("0,0,0,0,0,0,0,0,0,e^{1,2}", 10)
    assert br == {(0, 1): {9: RadExt.coerce(-1)}}


def test_parse_salamon_pads_trailing_zeros() -> None:
    assert parse_salamon("0,0,e12", 4) == parse_salamon("0,0,e12,0")
    with pytest.raises(NotationError):
        parse_salamon("0,0,e12,0,0", 4)


@pytest.mark.parametrize("bad", ["0,0,e11", "0,0,e12 e13", "0,0,x12"])
def test_parse_salamon_errors(bad: str) -> None:
    with pytest.raises(NotationError):
        parse_salamon(bad)


def test_format_round_trip() -> None:
    text = "(0, 0, 14/51 sqrt(3) e12, 7/51 sqrt(34) e13 - 2 e12)"
    br = parse_salamon(text)
    L = MetricLieAlgebra.from_brackets(4, br)
    out = format_salamon(L.C)
    assert parse_salamon(out) == br
    assert format_salamon(L.C, "unicode").startswith("(0, 0, 14/51 √3 e12")


def test_parse_metric() -> None:
    assert parse_metric("+--+") == (1, -1, -1, 1)
    assert parse_metric("23", 4) == (1, -1, -1, 1)
    assert parse_metric([1, -1]) == (1, -1)
    with pytest.raises(NotationError):
        parse_metric("23")
