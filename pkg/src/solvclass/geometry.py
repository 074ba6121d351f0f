"""Metric Lie algebras over RadExt and the curvature checks used for verification.

Indices here are 0-based. Brackets are ``[e_i, e_j] = sum_k C[i][j][k] e_k``
and metrics are diagonal. Endomorphisms are square lists of lists with
``E[row][col]``, so column ``i`` is the image of ``e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .exactnum import ONE, ZERO, RadExt

Matrix = list[list[RadExt]]


def _r(x) -> RadExt:
    return RadExt.coerce(x)


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a]
        out.append([sum((a * col[k] for k, a in nz), ZERO) for col in Bt])
    return out


def mat_add(A: Matrix, B: Matrix, s=1) -> Matrix:
    if s == 1:
        return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]
    return [[a + b * s for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, s) -> Matrix:
    return [[a * s for a in row] for row in A]


def trace(A: Matrix) -> RadExt:
    return sum((A[i][i] for i in range(len(A))), ZERO)


def is_zero_matrix(A: Matrix) -> bool:
    return all(not x for row in A for x in row)


@dataclass(frozen=True)
class MetricLieAlgebra:
    n: int
    C: tuple[tuple[tuple[RadExt, ...], ...], ...]
    metric: tuple[RadExt, ...]

    @classmethod
    def from_brackets(cls, n: int, brackets: dict[tuple[int, int], dict[int, object]],
                      metric: Sequence | None = None) -> MetricLieAlgebra:
        """``brackets[(i, j)] = {k: value}`` for ``[e_i, e_j]``; antisymmetry is filled in."""
        C = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), out in brackets.items():
            if i == j:
                raise ValueError("bracket of a vector with itself")
            for k, v in out.items():
                v = _r(v)
                C[i][j][k] = C[i][j][k] + v
                C[j][i][k] = C[j][i][k] - v
        g = tuple(_r(x) for x in (metric if metric is not None else [1] * n))
        if len(g) != n:
            raise ValueError("metric has wrong length")
        return cls(n, tuple(tuple(tuple(r) for r in plane) for plane in C), g)

    def with_metric(self, metric: Sequence) -> MetricLieAlgebra:
        return MetricLieAlgebra(self.n, self.C, tuple(_r(x) for x in metric))

    def bracket(self, u: Sequence, v: Sequence) -> list[RadExt]:
        out = [ZERO] * self.n
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.C[i][j]):
                    if c:
                        out[k] = out[k] + ab * c
        return out

    def ad(self, i: int) -> Matrix:
        return [[self.C[i][j][k] for j in range(self.n)] for k in range(self.n)]

    def adjoint(self, E: Matrix) -> Matrix:
        """Metric adjoint: ``<E x, y> = <x, E* y>``."""
        g = self.metric
        return [[E[b][a] * g[b] / g[a] for b in range(self.n)] for a in range(self.n)]

    def transformed(self, perm: Sequence[int], signs: Sequence[int]) -> MetricLieAlgebra:
        """Image under ``e_i -> signs[i] * e_{perm[i]}`` (0-based permutation)."""
        n = self.n
        C = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    v = self.C[i][j][k]
                    if v:
                        C[perm[i]][perm[j]][perm[k]] = v * (signs[i] * signs[j] * signs[k])
        g = [ZERO] * n
        for i in range(n):
            g[perm[i]] = self.metric[i]
        return MetricLieAlgebra(n, tuple(tuple(tuple(r) for r in plane) for plane in C), tuple(g))


def transform_endomorphism(E: Matrix, perm: Sequence[int], signs: Sequence[int]) -> Matrix:
    n = len(E)
    out = zeros(n)
    for r in range(n):
        for c in range(n):
            if E[r][c]:
                out[perm[r]][perm[c]] = E[r][c] * (signs[r] * signs[c])
    return out


def jacobi_check(L: MetricLieAlgebra) -> tuple[int, int, int] | None:
    """First ``(i, j, k)`` (0-based, i<j<k) where the Jacobi identity fails, or ``None``."""
    n = L.n
    basis = identity(n)
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = basis[i], basis[j], basis[k]
        s = [a + b + c for a, b, c in zip(
            L.bracket(L.bracket(ei, ej), ek), L.bracket(L.bracket(ej, ek), ei), L.bracket(L.bracket(ek, ei), ej))]
        if any(s):
            return i, j, k
    return None


def is_derivation(L: MetricLieAlgebra, D: Matrix) -> tuple[int, int] | None:
    """First pair ``(i, j)`` with ``D[e_i,e_j] != [De_i,e_j] + [e_i,De_j]``, or ``None``."""
    n = L.n
    cols = [[D[r][c] for r in range(n)] for c in range(n)]
    basis = identity(n)
    for i in range(n):
        for j in range(i + 1, n):
            lhs_vec = L.C[i][j]
            lhs = [sum((D[r][k] * lhs_vec[k] for k in range(n) if lhs_vec[k]), ZERO) for r in range(n)]
            rhs = [a + b for a, b in zip(L.bracket(cols[i], basis[j]), L.bracket(basis[i], cols[j]))]
            if lhs != rhs:
                return i, j
    return None


# -- curvature ----------------------------------------------------------

def connection(L: MetricLieAlgebra) -> list[Matrix]:
    """Matrices of ``nabla_{e_i}`` from the Koszul formula."""
    n, C, g = L.n, L.C, L.metric
    if any(not x for x in g):
        raise ValueError("degenerate metric")
    half_inv = [Fraction(1, 2) * x.inverse() for x in g]
    out = []
    for i in range(n):
        G = zeros(n)
        for j in range(n):
            for k in range(n):
                v = C[i][j][k] * g[k] - C[j][k][i] * g[i] + C[k][i][j] * g[j]
                if v:
                    G[k][j] = v * half_inv[k]
        out.append(G)
    return out


def curvature_endomorphisms(L: MetricLieAlgebra) -> dict[tuple[int, int], Matrix]:
    """``R(e_i, e_j) = [nabla_i, nabla_j] - nabla_[e_i,e_j]`` for ``i < j``."""
    nab = connection(L)
    out = {}
    for i, j in combinations(range(L.n), 2):
        R = mat_add(mat_mul(nab[i], nab[j]), mat_mul(nab[j], nab[i]), -1)
        for l, c in enumerate(L.C[i][j]):
            if c:
                R = mat_add(R, nab[l], -c)
        out[(i, j)] = R
    return out


def ricci_general(L: MetricLieAlgebra) -> Matrix:
    """Ricci operator (index raised) from the Levi-Civita connection.

    Contracts ``Ric(e_j, e_k) = sum_i e^i(R(e_i, e_j) e_k)`` directly from the
    connection coefficients, skipping zeros.
    """
    n, C, g = L.n, L.C, L.metric
    nab = connection(L)
    # nz[i][a] = nonzero (b, value) in row a of nabla_i
    nz = [[[(b, v) for b, v in enumerate(row) if v] for row in G] for G in nab]
    ric = zeros(n)
    for j in range(n):
        for k in range(n):
            total = ZERO
            for i in range(n):
                if i == j:
                    continue
                # (nabla_i nabla_j e_k - nabla_j nabla_i e_k)_i
                for l, v in nz[i][i]:
                    w = nab[j][l][k]
                    if w:
                        total = total + v * w
                for l, v in nz[j][i]:
                    w = nab[i][l][k]
                    if w:
                        total = total - v * w
                # - (nabla_[e_i,e_j] e_k)_i
                for l, c in enumerate(C[i][j]):
                    if c:
                        w = nab[l][i][k]
                        if w:
                            total = total - c * w
            ric[j][k] = total
    return [[ric[b][a] / g[a] for b in range(n)] for a in range(n)]


def ricci_diagonal(d, c: Sequence, g: Sequence) -> list[RadExt]:
    """Diagonal of ``Ric = 1/2 (tM X)^D`` with ``x_I = c_I^2 (e^M g)_I`` for a nice algebra.

    ``d`` is a NiceDiagram, ``c`` the structure constants in class order and
    ``g`` the diagonal metric.
    """
    from .diagram import exp_root_action

    scale = exp_root_action(d, [_r(x) for x in g])
    X = [_r(ci) * ci * s for ci, s in zip(c, scale)]
    out = [ZERO] * d.n
    for x, (i, j, k) in zip(X, d.classes):
        out[i - 1] = out[i - 1] - x
        out[j - 1] = out[j - 1] - x
        out[k - 1] = out[k - 1] + x
    return [v * Fraction(1, 2) for v in out]


def symmetric_part(L: MetricLieAlgebra, D: Matrix) -> Matrix:
    return mat_scale(mat_add(D, L.adjoint(D)), Fraction(1, 2))


def nilsoliton_rhs(L: MetricLieAlgebra, D: Matrix) -> Matrix:
    """``-Tr((D^s)^2) id - 1/2 [D, D*] + (Tr D) D^s``."""
    n = L.n
    Ds = symmetric_part(L, D)
    Dstar = L.adjoint(D)
    comm = mat_add(mat_mul(D, Dstar), mat_mul(Dstar, D), -1)
    out = mat_scale(identity(n), -trace(mat_mul(Ds, Ds)))
    out = mat_add(out, comm, Fraction(-1, 2))
    return mat_add(out, mat_scale(Ds, trace(D)))


def check_generalized_nilsoliton(L: MetricLieAlgebra, D: Matrix) -> dict[str, object]:
    """Residuals of the generalized nilsoliton equation; empty dict when it holds exactly."""
    report: dict[str, object] = {}
    diff = mat_add(ricci_general(L), nilsoliton_rhs(L, D), -1)
    bad = {(a, b): v for a, row in enumerate(diff) for b, v in enumerate(row) if v}
    if bad:
        report["ricci"] = bad
    Dstar = L.adjoint(D)
    tr = {i: trace(mat_mul(L.ad(i), Dstar)) for i in range(L.n)}
    tr = {i: v for i, v in tr.items() if v}
    if tr:
        report["trace_ad_Dstar"] = tr
    return report


def extend(L: MetricLieAlgebra, D: Matrix, tau: int = 1) -> MetricLieAlgebra:
    """``g x|_D span(e_0)`` with ``e_0`` appended last, ``[e_0, v] = D v`` and metric ``+tau`` on it."""
    n = L.n
    N = n + 1
    C = [[[ZERO] * N for _ in range(N)] for _ in range(N)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                C[i][j][k] = L.C[i][j][k]
    for i in range(n):
        for k in range(n):
            v = D[k][i]
            if v:
                C[n][i][k] = v
                C[i][n][k] = -v
    g = tuple(L.metric) + (_r(tau),)
    return MetricLieAlgebra(N, tuple(tuple(tuple(r) for r in plane) for plane in C), g)


def einstein_check(L: MetricLieAlgebra) -> RadExt | None:
    """The Einstein constant if ``Ric = lambda id``, else ``None``."""
    ric = ricci_general(L)
    lam = ric[0][0] if L.n else ZERO
    for a in range(L.n):
        for b in range(L.n):
            if ric[a][b] != (lam if a == b else ZERO):
                return None
    return lam


# -- Riemann operator on Lambda^2 and its invariants ---------------------

def riemann_operator(L: MetricLieAlgebra) -> Matrix:
    """Curvature as an endomorphism of Lambda^2 in the basis e^{ij}, i<j, lexicographic.

    Entry ``[(kl), (ij)]`` is ``<R(e_i,e_j) e_k, e_l> / (g_k g_l)``: the
    index pair ``kl`` is raised with the induced metric on Lambda^2.
    """
    n = L.n
    Rm = curvature_endomorphisms(L)
    pairs = list(combinations(range(n), 2))
    g = L.metric
    out = zeros(len(pairs))
    for col, (i, j) in enumerate(pairs):
        R = Rm[(i, j)]
        for row, (k, l) in enumerate(pairs):
            v = R[l][k]
            if v:
                out[row][col] = v / g[k]
    return out


def char_poly(A: Matrix) -> list[RadExt]:
    """Characteristic polynomial ``det(x id - A)``, coefficients from the leading one down.

    Faddeev-LeVerrier recursion; exact over any field of characteristic 0.
    """
    N = len(A)
    coeffs = [ONE]
    M = zeros(N)
    I = identity(N)
    for k in range(1, N + 1):
        M = mat_add(mat_mul(A, M), mat_scale(I, coeffs[-1]))
        coeffs.append(-trace(mat_mul(A, M)) / k)
    return coeffs


def _poly_trim(p: list[RadExt]) -> list[RadExt]:
    # ascending coefficients
    while p and not p[-1]:
        p = p[:-1]
    return p


def _poly_divmod(a: list[RadExt], b: list[RadExt]) -> tuple[list[RadExt], list[RadExt]]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    lead_inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        f = a[-1] * lead_inv
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] = a[i + shift] - f * c
        a = _poly_trim(a[:-1] if not a[-1] else a)
    return _poly_trim(q), a


def poly_gcd(a: list[RadExt], b: list[RadExt]) -> list[RadExt]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    inv = a[-1].inverse()
    return [c * inv for c in a]


def poly_eval_matrix(p_asc: list[RadExt], A: Matrix) -> Matrix:
    N = len(A)
    out = zeros(N)
    for c in reversed(p_asc):
        out = mat_add(mat_mul(out, A), mat_scale(identity(N), c))
    return out


def is_diagonalizable(A: Matrix, chi: list[RadExt] | None = None) -> bool:
    """Over C: the squarefree part of the characteristic polynomial annihilates ``A``."""
    chi = chi if chi is not None else char_poly(A)
    asc = list(reversed(chi))
    deriv = [c * k for k, c in enumerate(asc)][1:]
    g = poly_gcd(asc, deriv) if _poly_trim(deriv) else [ONE]
    sqfree, rem = _poly_divmod(asc, g)
    if rem:
        raise ArithmeticError("inexact squarefree division")
    return is_zero_matrix(poly_eval_matrix(sqfree, A))


@dataclass(frozen=True)
class CurvatureReport:
    riemann_op: tuple[tuple[RadExt, ...], ...]
    trace: RadExt
    char_poly_normalized: tuple[RadExt, ...]
    a2: RadExt | None
    diagonalizable: bool
    normalized: bool = True

    def to_json(self) -> dict:
        return {
            "trace": self.trace.to_triples(),
            "char_poly_normalized": [c.to_triples() for c in self.char_poly_normalized],
            "a2": self.a2.to_triples() if self.a2 is not None else None,
            "diagonalizable": self.diagonalizable,
            "normalized": self.normalized,
        }


def curvature_invariants(L: MetricLieAlgebra) -> CurvatureReport:
    R = riemann_operator(L)
    tr = trace(R)
    chi = char_poly(R)
    diag = is_diagonalizable(R, chi)
    if not tr:
        return CurvatureReport(tuple(map(tuple, R)), tr, tuple(chi), None, diag, normalized=False)
    inv = tr.inverse()
    norm, p = [], ONE
    for c in chi:
        norm.append(c * p)
        p = p * inv
    a2 = norm[2] if len(norm) > 2 else None
    return CurvatureReport(tuple(map(tuple, R)), tr, tuple(norm), a2, diag)


def compare_invariants(a: CurvatureReport, b: CurvatureReport) -> str:
    """``distinguishable`` when a2 or diagonalizability differ; otherwise ``indistinguishable``."""
    if not (a.normalized and b.normalized):
        raise ValueError("comparison needs trace-normalized reports")
    if a.a2 != b.a2 or a.diagonalizable != b.diagonalizable:
        return "distinguishable"
    return "indistinguishable"
