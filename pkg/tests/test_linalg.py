from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from solvclass.linalg import (F2Matrix, RatMatrix, f2_coset_min, f2_rref, f2_solve_affine, kernel_basis, logsign,
                              rref, solve_affine)

small = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, max_rows: int = 4, max_cols: int = 5) -> RatMatrix:
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return RatMatrix.of(rows, c)


def test_rref_pivots() -> None:
    red, piv = rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]], 3)
    assert piv == [0, 1]
    assert red[0] == [1, 0, 1]


def test_solve_affine_unique_and_inconsistent() -> None:
    M = RatMatrix.of([[1, 1], [1, -1]], 2)
    sol = solve_affine(M, [3, 1])
    assert sol.is_unique and sol.particular == (2, 1)
    assert solve_affine(RatMatrix.of([[1, 1], [2, 2]], 2), [1, 3]) is None


@given(matrices())
def test_kernel_basis_is_kernel(M: RatMatrix) -> None:
    basis = kernel_basis(M)
    assert len(basis) + M.rank() == M.ncols
    for v in basis:
        assert all(x == 0 for x in M.apply(v))


@given(matrices(), st.data())
def test_solve_affine_solutions(M: RatMatrix, data) -> None:
    x = data.draw(st.lists(small, min_size=M.ncols, max_size=M.ncols))
    b = M.apply(x)
    sol = solve_affine(M, b)
    assert sol is not None
    assert list(M.apply(sol.particular)) == list(b)
    params = [Fraction(1)] * sol.dim
    assert list(M.apply(sol.at(params))) == list(b)


def test_f2_solve_enumerates_coset() -> None:
    M = F2Matrix(((1, 1, 0), (0, 1, 1)), 3)
    sols = sorted(f2_solve_affine(M, [1, 0]))
    assert sols == [(0, 1, 1), (1, 0, 0)]
    assert f2_solve_affine(F2Matrix(((1, 1), (1, 1)), 2), [0, 1]) is None


@settings(max_examples=60)
@given(st.lists(st.integers(0, 63), min_size=1, max_size=5), st.integers(0, 63))
def test_coset_min_is_invariant(rows: list[int], x: int) -> None:
    red, piv = f2_rref(rows, 6)
    m = f2_coset_min(x, red, piv)
    bits = lambda v: tuple((v >> i) & 1 for i in range(6))  # position 0 is most significant
    assert bits(m) <= bits(x)
    for r in rows:
        assert f2_coset_min(x ^ r, red, piv) == m
    assert all(not (m >> p) & 1 for p in piv)


def test_logsign() -> None:
    assert logsign([Fraction(2), Fraction(-1, 3), 5]) == (0, 1, 0)
