"""Nondiagonal triples: admissible index sets and the linear solve for (lambda, A).

An index set is an ordered tuple of node pairs ``(i, j)``; the pair
``(i, j)`` stands for the offdiagonal entry ``a_ji e^i (x) e_j`` of D, that
is ``D e_i = lambda_i e_i + a_ji e_j``. Matrix positions are written
``(row, col) = (j, i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .diagram import NiceDiagram, Perm, automorphism_group, root_matrix
from .linalg import RatMatrix, kernel_basis, solve_affine

Pair = tuple[int, int]
IndexSet = tuple[Pair, ...]
Position = tuple[int, int]


# -- derivation equations ---------------------------------------------

@dataclass(frozen=True)
class Term:
    """``sign * d[pos] * c[cls]`` inside one derivation equation."""

    sign: int
    pos: Position
    cls: int


def _bracket(d: NiceDiagram, p: int, q: int) -> tuple[int, int] | None:
    """``[e_p, e_q] = orient * c_cls * e_target``; returns ``(cls, orient)``."""
    k = d.target.get((p, q))
    if k is None:
        return None
    return d.class_index[frozenset((p, q))], (1 if p < q else -1)


def derivation_equations(d: NiceDiagram) -> list[list[Term]]:
    """Offdiagonal part of ``N[e_p,e_q] - [N e_p, e_q] - [e_p, N e_q] = 0``.

    One equation per ``p < q`` and output index ``r``; equations whose only
    content is diagonal are dropped (diagonal entries are governed by the
    root matrix).
    """
    n = d.n
    eqs = []
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            per_r: dict[int, list[Term]] = {}
            diag_r: set[int] = set()
            b = _bracket(d, p, q)
            if b is not None:
                k = d.target[(p, q)]
                for r in range(1, n + 1):
                    if r == k:
                        diag_r.add(r)
                    else:
                        per_r.setdefault(r, []).append(Term(b[1], (r, k), b[0]))
            for s in range(1, n + 1):
                bs = _bracket(d, s, q)
                if bs is not None:
                    r = d.target[(s, q)]
                    if s == p:
                        diag_r.add(r)
                    else:
                        per_r.setdefault(r, []).append(Term(-bs[1], (s, p), bs[0]))
                bs = _bracket(d, p, s)
                if bs is not None:
                    r = d.target[(p, s)]
                    if s == q:
                        diag_r.add(r)
                    else:
                        per_r.setdefault(r, []).append(Term(-bs[1], (s, q), bs[0]))
            for r, terms in per_r.items():
                if r in diag_r:
                    raise AssertionError("diagonal and offdiagonal entries share an equation")
                eqs.append(terms)
    return eqs


def support_fixpoint(eqs: list[list[Term]], alive: Iterable[Position]) -> set[Position]:
    """Drop any entry that is the lone surviving term of some equation, until stable."""
    alive = set(alive)
    changed = True
    while changed:
        changed = False
        for eq in eqs:
            live = [t.pos for t in eq if t.pos in alive]
            if len(live) == 1:
                alive.discard(live[0])
                changed = True
    return alive


def derivation_support(d: NiceDiagram) -> set[Position]:
    """Over-approximation of the offdiagonal support of derivations of any algebra on ``d``."""
    n = d.n
    everything = {(r, s) for r in range(1, n + 1) for s in range(1, n + 1) if r != s}
    return support_fixpoint(derivation_equations(d), everything)


# -- index sets ---------------------------------------------------------

def satisfies_n1_n3(d: NiceDiagram, a: IndexSet) -> bool:
    used: list[int] = []
    for i, j in a:
        if i == j:
            return False
        used += [i, j]
        if any(d.target.get((i, k)) == j for k in range(1, d.n + 1)):
            return False
    return len(used) == len(set(used))


def act_on_index_set(perm: Perm, a: IndexSet) -> IndexSet:
    return tuple(sorted((perm[i - 1], perm[j - 1]) for i, j in a))


def canonical_index_set(a: IndexSet, group: list[Perm]) -> IndexSet:
    return min(act_on_index_set(g, a) for g in group)


def stabilizer(a: IndexSet, group: list[Perm]) -> list[Perm]:
    key = tuple(sorted(a))
    return [g for g in group if act_on_index_set(g, a) == key]


def candidate_index_sets(d: NiceDiagram, group: list[Perm] | None = None) -> list[IndexSet]:
    """Nonempty index sets satisfying N1-N3 and the support prefilter, one per Aut-orbit."""
    eqs = derivation_equations(d)
    alive = support_fixpoint(eqs, {(r, s) for r in range(1, d.n + 1) for s in range(1, d.n + 1) if r != s})
    allowed = sorted((i, j) for (j, i) in alive if satisfies_n1_n3(d, ((i, j),)))
    group = group if group is not None else automorphism_group(d)
    found: set[IndexSet] = set()

    def grow(start: int, chosen: list[Pair], used: set[int]) -> None:
        if chosen:
            a = tuple(chosen)
            positions = {(j, i) for i, j in a}
            if support_fixpoint(eqs, positions) == positions:
                found.add(canonical_index_set(a, group))
        for idx in range(start, len(allowed)):
            i, j = allowed[idx]
            if i in used or j in used:
                continue
            chosen.append((i, j))
            grow(idx + 1, chosen, used | {i, j})
            chosen.pop()

    grow(0, [], set())
    return sorted(found, key=lambda a: (len(a), a))


# -- solving for lambda and A -------------------------------------------

@dataclass(frozen=True)
class NondiagonalTriple:
    diagram: NiceDiagram
    pairs: IndexSet
    lam: tuple[Fraction, ...]
    A: tuple[Fraction, ...]

    @property
    def trace(self) -> Fraction:
        return sum(self.lam, Fraction(0))

    def A_of(self, i: int, j: int) -> Fraction:
        return self.A[self.pairs.index((i, j))]


@dataclass(frozen=True)
class ParametricFamily:
    """``A = A0 + sum t_k * directions[k]``; lambda is fixed."""

    lam: tuple[Fraction, ...]
    A0: tuple[Fraction, ...]
    directions: tuple[tuple[Fraction, ...], ...]
    n5: int
    kernel_dim: int
    size: int

    @property
    def trace(self) -> Fraction:
        return sum(self.lam, Fraction(0))


@dataclass(frozen=True)
class TripleOutcome:
    kind: str  # "triple" | "rejected" | "parametric"
    pairs: IndexSet
    triple: NondiagonalTriple | None = None
    reason: str | None = None
    family: ParametricFamily | None = None
    lam: tuple[Fraction, ...] | None = field(default=None, compare=False)


def _n5_row(basis, i: int, j: int) -> list[Fraction]:
    return [sum(K, Fraction(0)) - K[i - 1] + K[j - 1] for K in basis]


def n5_independent(d: NiceDiagram, a: IndexSet) -> bool:
    """Whether the trace conditions of the pairs are ``|a|`` independent equations on ker M."""
    basis = kernel_basis(root_matrix(d))
    if not a:
        return True
    return RatMatrix.of([_n5_row(basis, i, j) for i, j in a], len(basis)).rank() == len(a)


def solve_lambda_A(d: NiceDiagram, a: IndexSet) -> TripleOutcome:
    """Impose N4 on a kernel basis and N5 on every pair; classify the solution."""
    basis = kernel_basis(root_matrix(d))
    nb, na = len(basis), len(a)
    rows, rhs = [], []
    for i, j in a:
        rows.append(_n5_row(basis, i, j) + [Fraction(0)] * na)
        rhs.append(Fraction(0))
    for mu in basis:
        smu = sum(mu, Fraction(0))
        row = [sum((x * y for x, y in zip(K, mu)), Fraction(0)) for K in basis]
        row += [-(smu + mu[j - 1] - mu[i - 1]) for i, j in a]
        rows.append(row)
        rhs.append(smu)
    sol = solve_affine(RatMatrix.of(rows, nb + na), rhs) if rows else None
    if sol is None:
        return TripleOutcome("rejected", a, reason="no-solution")
    if any(any(v[:nb]) for v in sol.basis):
        return TripleOutcome("rejected", a, reason="lambda-undetermined")
    t = sol.particular[:nb]
    lam = tuple(sum((tb * K[idx] for tb, K in zip(t, basis)), Fraction(0)) for idx in range(d.n))
    if sum(lam) == 0:
        return TripleOutcome("rejected", a, reason="zero-trace", lam=lam)
    A0 = tuple(sol.particular[nb:])
    if sol.basis:
        n5 = nb - (RatMatrix.of([_n5_row(basis, i, j) for i, j in a], nb).rank() if nb else 0)
        fam = ParametricFamily(lam, A0, tuple(tuple(v[nb:]) for v in sol.basis), n5, nb, na)
        return TripleOutcome("parametric", a, family=fam, lam=lam)
    if any(x == 0 for x in A0):
        return TripleOutcome("rejected", a, reason="zero-A", lam=lam)
    return TripleOutcome("triple", a, triple=NondiagonalTriple(d, a, lam, A0), lam=lam)


def nikolayevsky_diagonal(d: NiceDiagram) -> tuple[Fraction, ...]:
    """The lambda in ker M with ``sum lambda_i mu_i = sum mu_i`` for all mu in ker M."""
    basis = kernel_basis(root_matrix(d))
    if not basis:
        return tuple(Fraction(0) for _ in range(d.n))
    gram = [[sum((x * y for x, y in zip(K, L)), Fraction(0)) for K in basis] for L in basis]
    rhs = [sum(L, Fraction(0)) for L in basis]
    sol = solve_affine(RatMatrix.of(gram, len(basis)), rhs)
    if sol is None or not sol.is_unique:
        raise ArithmeticError("degenerate Gram matrix on ker M")
    return tuple(sum((t * K[i] for t, K in zip(sol.particular, basis)), Fraction(0)) for i in range(d.n))


def check_n_conditions(t: NondiagonalTriple) -> list[str]:
    """Names of the conditions N1-N5 (and kernel membership) that fail; empty when all hold."""
    d, a = t.diagram, t.pairs
    bad = []
    if not satisfies_n1_n3(d, a):
        bad.append("N1-N3")
    M = root_matrix(d)
    if any(x != 0 for x in M.apply(t.lam)):
        bad.append("N6-kernel")
    tr = t.trace
    for i, j in a:
        if tr != t.lam[i - 1] - t.lam[j - 1]:
            bad.append(f"N5{(i, j)}")
    sA = sum(t.A, Fraction(0))
    for mu in kernel_basis(M):
        lhs = sum((x * y for x, y in zip(t.lam, mu)), Fraction(0))
        rhs = (1 + sA) * sum(mu, Fraction(0)) + sum(
            (Aij * (mu[j - 1] - mu[i - 1]) for (i, j), Aij in zip(a, t.A)), Fraction(0))
        if lhs != rhs:
            bad.append("N4")
            break
    if tr == 0 or any(x == 0 for x in t.A):
        bad.append("nonzero")
    return bad
