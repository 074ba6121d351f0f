"""Dense exact linear algebra over Q and GF(2).

Row reduction pivots on the leftmost nonzero column, taking the smallest
row index among candidates, so every output is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

from .exactnum import RadExt


@dataclass(frozen=True)
class RatMatrix:
    """Rational matrix stored row-major; ``ncols`` is explicit so 0-row matrices keep their width."""

    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def __post_init__(self):
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("inconsistent row length")

    @classmethod
    def of(cls, rows: Sequence[Sequence], ncols: int | None = None) -> RatMatrix:
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def transpose(self) -> RatMatrix:
        return RatMatrix(tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)), self.nrows)

    def apply(self, v: Sequence) -> list:
        return [sum((a * x for a, x in zip(r, v)), Fraction(0)) for r in self.rows]

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def mod2(self) -> F2Matrix:
        return F2Matrix(tuple(tuple(int(x.numerator % 2) if x.denominator == 1 else _bad_mod2(x) for x in r)
                              for r in self.rows), self.ncols)


def _bad_mod2(x):
    raise ValueError(f"cannot reduce non-integer {x} mod 2")


@dataclass(frozen=True)
class F2Matrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a & b for a, b in zip(r, v)) % 2 for r in self.rows)


@dataclass(frozen=True)
class AffineSolutionSet:
    """``particular + span(basis)``; unique iff the basis is empty."""

    particular: tuple
    basis: tuple[tuple, ...]
    field: str = "Q"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_unique(self) -> bool:
        return not self.basis

    def at(self, params: Sequence) -> tuple:
        if len(params) != len(self.basis):
            raise ValueError("wrong number of parameters")
        out = list(self.particular)
        for t, b in zip(params, self.basis):
            out = [x + t * y for x, y in zip(out, b)]
        if self.field == "GF2":
            return tuple(x % 2 for x in out)
        return tuple(out)

    def __iter__(self) -> Iterator[tuple]:
        if self.field != "GF2":
            raise TypeError("only GF(2) solution sets are enumerable")
        for bits in product((0, 1), repeat=len(self.basis)):
            yield self.at(bits)

    def __len__(self) -> int:
        if self.field != "GF2":
            raise TypeError("only GF(2) solution sets are finite")
        return 2 ** len(self.basis)


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form over a field; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], RadExt) else m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def kernel_basis(M: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, one vector per free column of the RREF."""
    red, pivots = rref(M.rows, M.ncols)
    free = [c for c in range(M.ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def solve_affine(M: RatMatrix, b: Sequence) -> AffineSolutionSet | None:
    """All solutions of ``M x = b``, or ``None`` when inconsistent."""
    if len(b) != M.nrows:
        raise ValueError("right-hand side has wrong length")
    aug = [list(r) + [Fraction(x)] for r, x in zip(M.rows, b)]
    red, pivots = rref(aug, M.ncols + 1)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [Fraction(0)] * M.ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return AffineSolutionSet(tuple(x), tuple(kernel_basis(M)), "Q")


# -- GF(2) ------------------------------------------------------------

def _bits(v: Sequence[int]) -> int:
    return sum((int(x) & 1) << i for i, x in enumerate(v))


def _unbits(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def f2_rref(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """RREF of bitmask rows (bit i = column i); returns (rows, pivots)."""
    work = list(rows)
    out, pivots = [], []
    for c in range(ncols):
        piv = next((i for i, r in enumerate(work) if (r >> c) & 1), None)
        if piv is None:
            continue
        pr = work.pop(piv)
        work = [r ^ pr if (r >> c) & 1 else r for r in work]
        out = [r ^ pr if (r >> c) & 1 else r for r in out]
        out.append(pr)
        pivots.append(c)
    return out, pivots


def f2_solve_affine(M: F2Matrix, b: Sequence[int]) -> AffineSolutionSet | None:
    """All GF(2) solutions of ``M x = b`` as particular + kernel basis, or ``None``."""
    if len(b) != M.nrows:
        raise ValueError("right-hand side has wrong length")
    n = M.ncols
    aug = [_bits(r) | ((int(x) & 1) << n) for r, x in zip(M.rows, b)]
    red, pivots = f2_rref(aug, n + 1)
    if pivots and pivots[-1] == n:
        return None
    part = [0] * n
    for r, p in zip(red, pivots):
        part[p] = (r >> n) & 1
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[f] = 1
        for r, p in zip(red, pivots):
            v[p] = (r >> f) & 1
        basis.append(tuple(v))
    return AffineSolutionSet(tuple(part), tuple(basis), "GF2")


def f2_coset_min(x: int, basis_rref: Sequence[int], pivots: Sequence[int]) -> int:
    """Lexicographically smallest element of ``x + span(basis)``.

    Position 0 is the most significant; the basis must be in RREF with
    matching ``pivots``.
    """
    for r, p in zip(basis_rref, pivots):
        if (x >> p) & 1:
            x ^= r
    return x


def logsign(v: Sequence) -> tuple[int, ...]:
    """1 for negative entries, 0 for positive ones."""
    out = []
    for x in v:
        s = x.sign() if isinstance(x, RadExt) else (x > 0) - (x < 0)
        if s == 0:
            raise ValueError("logsign of zero")
        out.append(1 if s < 0 else 0)
    return tuple(out)


__all__ = [
    "RatMatrix", "F2Matrix", "AffineSolutionSet", "rref", "kernel_basis", "solve_affine",
    "f2_rref", "f2_solve_affine", "f2_coset_min", "logsign",
]
