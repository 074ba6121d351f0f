"""Exact arithmetic in multiquadratic fields Q(sqrt m1, ..., sqrt mk).

An element is stored as a finite map ``radicand -> rational coefficient``
with squarefree positive radicands; radicand 1 carries the rational part.
The representation is canonical, so equality is map equality.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import gcd, isqrt
from typing import Iterable, Union

Rational = Fraction
Number = Union[int, Fraction, "RadExt"]


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of a positive integer by trial division."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n == s*s*m`` and ``m`` squarefree."""
    s, m = 1, 1
    for p, e in factorize(n):
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    return s, m


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factorize(n))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


@total_ordering
class RadExt:
    """Element ``sum q_m * sqrt(m)`` of a multiquadratic extension of Q."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, Fraction] | None = None, *, _canonical: bool = False):
        if _canonical:
            self._terms = terms or {}
        else:
            acc: dict[int, Fraction] = {}
            for m, q in (terms or {}).items():
                q = _as_fraction(q)
                if q == 0:
                    continue
                if m < 1:
                    raise ValueError(f"radicand must be positive, got {m}")
                s, sf = squarefree_split(m)
                acc[sf] = acc.get(sf, Fraction(0)) + q * s
            self._terms = {m: q for m, q in acc.items() if q != 0}
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def coerce(cls, x: Number) -> RadExt:
        if isinstance(x, RadExt):
            return x
        q = _as_fraction(x)
        return cls({1: q} if q else {}, _canonical=True)

    @classmethod
    def sqrt(cls, m: int) -> RadExt:
        return cls({m: Fraction(1)})

    # -- inspection ---------------------------------------------------
    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def sort_key(self) -> tuple:
        return tuple((m, q) for m, q in sorted(self._terms.items()))

    def to_triples(self) -> list[list[int]]:
        return [[m, q.numerator, q.denominator] for m, q in sorted(self._terms.items())]

    @classmethod
    def from_triples(cls, triples: Iterable[Iterable[int]]) -> RadExt:
        acc: dict[int, Fraction] = {}
        for m, num, den in triples:
            acc[m] = acc.get(m, Fraction(0)) + Fraction(num, den)
        return cls(acc)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: Number) -> RadExt:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, q in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = q
            else:
                v += q
                if v:
                    out[m] = v
                else:
                    del out[m]
        return RadExt(out, _canonical=True)

    __radd__ = __add__

    def __neg__(self) -> RadExt:
        return RadExt({m: -q for m, q in self._terms.items()}, _canonical=True)

    def __pos__(self) -> RadExt:
        return self

    def __sub__(self, other: Number) -> RadExt:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> RadExt:
        return _coerce(other) + (-self)

    def __mul__(self, other: Number) -> RadExt:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ZERO
            return RadExt({m: q * other for m, q in self._terms.items()}, _canonical=True)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out: dict[int, Fraction] = {}
        for m1, q1 in self._terms.items():
            for m2, q2 in other._terms.items():
                if m1 == 1:
                    m, q = m2, q1 * q2
                elif m2 == 1:
                    m, q = m1, q1 * q2
                else:
                    g = gcd(m1, m2)
                    m, q = (m1 // g) * (m2 // g), q1 * q2 * g
                out[m] = out.get(m, Fraction(0)) + q
        return RadExt({m: q for m, q in out.items() if q}, _canonical=True)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> RadExt:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RadExt({m: q / other for m, q in self._terms.items()}, _canonical=True)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> RadExt:
        return _coerce(other) * self.inverse()

    def __pow__(self, k: int) -> RadExt:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> RadExt:
        """Multiplicative inverse, rationalized by successive conjugation."""
        if not self._terms:
            raise ZeroDivisionError("division by zero")
        if self.is_rational():
            return RadExt({1: 1 / self._terms[1]}, _canonical=True)
        if len(self._terms) == 1:
            (m, q), = self._terms.items()
            return RadExt({m: 1 / (q * m)}, _canonical=True)
        # write self = u + v*sqrt(p) for a prime p dividing some radicand;
        # then self * (u - v*sqrt(p)) = u^2 - p*v^2 no longer involves p
        p = next(p for m in self._terms if m > 1 for p, _ in factorize(m))
        conj = RadExt({m: (-q if m % p == 0 else q) for m, q in self._terms.items()}, _canonical=True)
        norm = self * conj
        return conj * norm.inverse()

    # -- sign and order -----------------------------------------------
    def sign(self) -> int:
        """Exact sign, by interval enclosure of each sqrt with doubling precision."""
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self._terms[1] > 0 else -1
        bits = 32
        while True:
            scale = 1 << bits
            lo = hi = Fraction(0)
            for m, q in self._terms.items():
                r = isqrt(m * scale * scale)
                if r * r == m * scale * scale:
                    a = b = Fraction(r, scale)
                else:
                    a, b = Fraction(r, scale), Fraction(r + 1, scale)
                if q > 0:
                    lo += q * a
                    hi += q * b
                else:
                    lo += q * b
                    hi += q * a
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __abs__(self) -> RadExt:
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, RadExt):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            return self._terms == {1: other}
        return NotImplemented

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self - other).sign() < 0

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._terms.get(1, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __float__(self) -> float:
        return float(sum(float(q) * float(m) ** 0.5 for m, q in self._terms.items()))

    # -- text ---------------------------------------------------------
    def __repr__(self) -> str:
        return f"RadExt({self._terms!r})"

    def __str__(self) -> str:
        return format_radext(self)


def _coerce(x):
    if isinstance(x, RadExt):
        return x
    if isinstance(x, (int, Fraction)):
        return RadExt.coerce(x)
    return NotImplemented


ZERO = RadExt({}, _canonical=True)
ONE = RadExt({1: Fraction(1)}, _canonical=True)


def rad_add(a: Number, b: Number) -> RadExt:
    return RadExt.coerce(a) + b


def rad_mul(a: Number, b: Number) -> RadExt:
    return RadExt.coerce(a) * b


def rad_inverse(a: Number) -> RadExt:
    return RadExt.coerce(a).inverse()


def rad_sign(a: Number) -> int:
    return RadExt.coerce(a).sign()


def rad_sqrt_of_rational(x, sign: int = 1) -> RadExt:
    """Square root of a nonnegative rational as a single term ``q*sqrt(m)``.

    ``sqrt(p/q)`` is normalized as ``sqrt(p*q)/q`` before extracting squares.
    """
    x = _as_fraction(x.to_fraction() if isinstance(x, RadExt) else x)
    if x < 0:
        raise ValueError(f"square root of negative rational {x}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if x == 0:
        return ZERO
    s, m = squarefree_split(x.numerator * x.denominator)
    return RadExt({m: Fraction(sign * s, x.denominator)}, _canonical=True)


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_radext(x: RadExt, style: str = "unicode") -> str:
    """Text form: ``5/31 √3`` (unicode) or ``5/31*sqrt(3)`` (ascii)."""
    terms = sorted(x.terms.items())
    if not terms:
        return "0"
    parts = []
    for m, q in terms:
        if m == 1:
            body = _fmt_q(abs(q))
        elif style == "ascii":
            body = f"sqrt({m})" if abs(q) == 1 else f"{_fmt_q(abs(q))}*sqrt({m})"
        else:
            body = f"√{m}" if abs(q) == 1 else f"{_fmt_q(abs(q))} √{m}"
        parts.append(("-" if q < 0 else "+", body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, body in parts[1:]:
        out += f" {s} {body}"
    return out
