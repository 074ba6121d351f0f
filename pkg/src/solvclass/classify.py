"""Classification of nondiagonal solutions on nice diagrams, up to equivalence.

The pipeline for one diagram and one index set is: solve for lambda and A,
solve the X system (possibly with one free parameter, resolved by squaring
the derivation constraints), solve the signature system over GF(2), find
the structure-constant signs compatible with Jacobi and the derivation
property, and finally reduce modulo sign flips and diagram automorphisms.

Sign vectors are bit tuples over ``classes + pairs``. For a class the bit is
the logsign of the Salamon coefficient ``-c`` (so bit 0 prints as a positive
coefficient); for a pair it is the logsign of ``a``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Iterable, Sequence

from . import geometry
from .diagram import NiceDiagram, Perm, automorphism_group, is_surjective, jacobi_terms, root_matrix
from .exactnum import ZERO, RadExt, rad_sqrt_of_rational
from .linalg import F2Matrix, RatMatrix, f2_coset_min, f2_rref, f2_solve_affine, logsign, solve_affine
from .triple import (IndexSet, NondiagonalTriple, candidate_index_sets, derivation_equations, n5_independent,
                     solve_lambda_A, stabilizer)

Q0 = Fraction(0)


# -- records --------------------------------------------------------------

@dataclass(frozen=True)
class SolutionRecord:
    """A nondiagonal solution: bracket constants, offdiagonal entries and signature.

    ``c`` follows ``[e_i, e_j] = c_I e_k`` (``i < j``) in class order and ``a``
    follows the order of ``pairs``; ``a[p]`` sits at matrix position ``(j, i)``.
    """

    diagram: NiceDiagram
    pairs: IndexSet
    lam: tuple[Fraction, ...]
    A: tuple[Fraction, ...]
    X: tuple[Fraction, ...]
    c: tuple[RadExt, ...]
    a: tuple[RadExt, ...]
    epsilon: tuple[int, ...]

    @property
    def triple(self) -> NondiagonalTriple:
        return NondiagonalTriple(self.diagram, self.pairs, self.lam, self.A)

    @property
    def trace(self) -> Fraction:
        return sum(self.lam, Q0)

    def algebra(self) -> geometry.MetricLieAlgebra:
        br = {(i - 1, j - 1): {k - 1: c} for (i, j, k), c in zip(self.diagram.classes, self.c)}
        return geometry.MetricLieAlgebra.from_brackets(self.diagram.n, br, self.epsilon)

    def derivation(self) -> geometry.Matrix:
        n = self.diagram.n
        D = geometry.zeros(n)
        for i, l in enumerate(self.lam):
            D[i][i] = RadExt.coerce(l)
        for (i, j), v in zip(self.pairs, self.a):
            D[j - 1][i - 1] = v
        return D

    @property
    def timelike(self) -> str:
        return timelike_string(self.epsilon)

    def to_json(self) -> dict:
        return {
            "diagram": self.diagram.to_json(),
            "convention": "[e_i,e_j] = c e_k for i<j; a at row j, column i for the pair (i,j)",
            "A": [list(p) for p in self.pairs],
            "A_values": [_q(x) for x in self.A],
            "lambda": [_q(x) for x in self.lam],
            "X": [_q(x) for x in self.X],
            "c": [{"class": list(cl), "abs": abs(v).to_triples(), "sign": v.sign()}
                  for cl, v in zip(self.diagram.classes, self.c)],
            "a": [{"pair": list(p), "abs": abs(v).to_triples(), "sign": v.sign()}
                  for p, v in zip(self.pairs, self.a)],
            "epsilon": list(self.epsilon),
        }

    @classmethod
    def from_json(cls, data: dict) -> SolutionRecord:
        d = NiceDiagram.from_json(data["diagram"])
        pairs = tuple(tuple(int(x) for x in p) for p in data["A"])
        by_class = {tuple(e["class"]): RadExt.from_triples(e["abs"]) * int(e["sign"]) for e in data["c"]}
        by_pair = {tuple(e["pair"]): RadExt.from_triples(e["abs"]) * int(e["sign"]) for e in data["a"]}
        if set(by_class) != set(d.classes):
            raise ValueError("structure constants do not match the diagram classes")
        if set(by_pair) != set(pairs):
            raise ValueError("offdiagonal entries do not match the index set")
        return cls(d, pairs,
                   tuple(Fraction(x) for x in data["lambda"]),
                   tuple(Fraction(x) for x in data["A_values"]),
                   tuple(Fraction(x) for x in data.get("X", [])),
                   tuple(by_class[cl] for cl in d.classes),
                   tuple(by_pair[p] for p in pairs),
                   tuple(int(e) for e in data["epsilon"]))


def _q(x: Fraction) -> str:
    return str(Fraction(x))


def timelike_string(eps: Sequence[int]) -> str:
    """Indices of the timelike basis vectors, e.g. ``"135"``; ``"+"`` for the definite case."""
    idx = [str(i + 1) for i, e in enumerate(eps) if e < 0]
    if any(len(s) > 1 for s in idx):
        return ",".join(idx)
    return "".join(idx) or "+"


@dataclass(frozen=True)
class Rejection:
    diagram: NiceDiagram
    pairs: IndexSet
    reason: str
    detail: str = ""

    @property
    def unresolved(self) -> bool:
        return self.reason.startswith("unresolved")

    def to_json(self) -> dict:
        return {"diagram": self.diagram.to_json(), "A": [list(p) for p in self.pairs],
                "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class ClassRow:
    """One table row: a (c, D) representative and its admissible signatures."""

    records: tuple[SolutionRecord, ...]

    @property
    def rep(self) -> SolutionRecord:
        return self.records[0]

    @property
    def signatures(self) -> tuple[str, ...]:
        return tuple(sorted(r.timelike for r in self.records))

    def to_json(self) -> dict:
        return {"records": [r.to_json() for r in self.records], "S": list(self.signatures)}


@dataclass
class ClassificationReport:
    rows: list[ClassRow] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)
    verification_failures: list[tuple[SolutionRecord, list[str]]] = field(default_factory=list)

    @property
    def unresolved(self) -> list[Rejection]:
        return [r for r in self.rejections if r.unresolved]

    @property
    def records(self) -> list[SolutionRecord]:
        return [rec for row in self.rows for rec in row.records]

    def to_json(self) -> dict:
        return {
            "rows": [r.to_json() for r in self.rows],
            "rejections": [r.to_json() for r in self.rejections],
            "verification_failures": [
                {"record": rec.to_json(), "failures": msgs} for rec, msgs in self.verification_failures],
        }


# -- the X system -----------------------------------------------------------

def _rhs_linear(n: int, pairs: IndexSet, A: Sequence) -> list:
    s = sum(A, Q0)
    out = [-s] * n
    for (i, j), v in zip(pairs, A):
        out[i - 1] += v
        out[j - 1] -= v
    return out


def x_system(d: NiceDiagram, pairs: IndexSet, lam: Sequence[Fraction], A0: Sequence[Fraction],
             directions: Sequence[Sequence[Fraction]] = ()):
    """Solutions ``(X, t)`` of the Ricci system with ``A = A0 + sum t_k directions[k]``.

    Returns ``None`` when inconsistent.
    """
    n, m = d.n, d.m
    tr = sum(lam, Q0)
    M = root_matrix(d)
    r0 = [x + y - 1 for x, y in zip(lam, _rhs_linear(n, pairs, A0))]
    rdirs = [_rhs_linear(n, pairs, v) for v in directions]
    rows, rhs = [], []
    for r in range(n):
        row = [M.rows[I][r] for I in range(m)] + [-2 * tr * rd[r] for rd in rdirs]
        rows.append(row)
        rhs.append(2 * tr * r0[r])
    return solve_affine(RatMatrix.of(rows, m + len(rdirs)), rhs)


def compute_X(t: NondiagonalTriple):
    """Solution set of ``tM X = 2 Tr D (...)`` for a concrete triple, or ``None`` if inconsistent."""
    if t.trace == 0:
        raise ValueError("trace of D must be nonzero")
    return x_system(t.diagram, t.pairs, t.lam, t.A)


# -- signs over GF(2) -------------------------------------------------------

def solve_epsilon(d: NiceDiagram, pairs: IndexSet, A: Sequence, X: Sequence, trace) -> list[tuple[int, ...]]:
    """All ``epsilon`` with ``M_2 logsign(eps) = logsign X`` and ``eps_i eps_j = sign(A Tr D)``."""
    rows, rhs = [], []
    for (i, j, k), bit in zip(d.classes, logsign(X)):
        r = [0] * d.n
        r[i - 1] = r[j - 1] = r[k - 1] = 1
        rows.append(tuple(r))
        rhs.append(bit)
    for (i, j), v in zip(pairs, A):
        r = [0] * d.n
        r[i - 1] = r[j - 1] = 1
        rows.append(tuple(r))
        rhs.append(logsign([v * trace])[0])
    sol = f2_solve_affine(F2Matrix(tuple(rows), d.n), rhs)
    if sol is None:
        return []
    return sorted(tuple(-1 if b else 1 for b in bits) for bits in sol)


def gauge_rows(d: NiceDiagram, pairs: IndexSet) -> list[int]:
    """Bitmasks over ``classes + pairs``: the sign changes induced by flipping each ``e_i``."""
    out = []
    m = d.m
    for v in range(1, d.n + 1):
        mask = 0
        for idx, cl in enumerate(d.classes):
            if v in cl:
                mask |= 1 << idx
        for idx, p in enumerate(pairs):
            if v in p:
                mask |= 1 << (m + idx)
        out.append(mask)
    return out


def _bits_to_tuple(x: int, width: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(width))


def _tuple_to_bits(t: Sequence[int]) -> int:
    return sum(b << i for i, b in enumerate(t))


def _signed(d: NiceDiagram, cmag: Sequence[RadExt], amag: Sequence[RadExt], bits: Sequence[int]):
    m = d.m
    c = tuple(-v if not b else v for v, b in zip(cmag, bits[:m]))
    a = tuple(-v if b else v for v, b in zip(amag, bits[m:]))
    return c, a


def _jacobi_ok(eqs, c) -> bool:
    return all(not sum((s * c[I] * c[J] for s, I, J in eq), ZERO) for eq in eqs)


def _derivation_ok(eqs, positions: dict, c, a) -> bool:
    for eq in eqs:
        total = ZERO
        for t in eq:
            idx = positions.get(t.pos)
            if idx is not None:
                total = total + a[idx] * c[t.cls] * t.sign
        if total:
            return False
    return True


def magnitudes(t: NondiagonalTriple, X: Sequence[Fraction]) -> tuple[tuple[RadExt, ...], tuple[RadExt, ...]]:
    tr = t.trace
    cmag = tuple(rad_sqrt_of_rational(abs(x)) for x in X)
    amag = tuple(rad_sqrt_of_rational(abs(2 * v * tr)) for v in t.A)
    return cmag, amag


def solve_structure(t: NondiagonalTriple, X: Sequence[Fraction], *, representatives: bool = False,
                    exhaustive: bool = False) -> list[tuple[int, ...]] | str:
    """Sign vectors (over classes + pairs) passing the Jacobi and derivation checks.

    Both checks are equivariant under flipping basis vectors, so only one sign
    vector per coset of the gauge image is tested and passing cosets are
    expanded afterwards; ``representatives=True`` skips the expansion and
    ``exhaustive=True`` tests every vector directly. Returns a rejection
    reason string when nothing passes.
    """
    d, pairs = t.diagram, t.pairs
    if any(x == 0 for x in X):
        return "zero-x"
    cmag, amag = magnitudes(t, X)
    width = d.m + len(pairs)
    jac = jacobi_terms(d)
    der = derivation_equations(d)
    positions = {(j, i): idx for idx, (i, j) in enumerate(pairs)}
    red, pivots = f2_rref(gauge_rows(d, pairs), width)
    if exhaustive:
        candidates = (_tuple_to_bits(b) for b in product((0, 1), repeat=width))
    else:
        free = [p for p in range(width) if p not in pivots]
        candidates = (sum(b << p for b, p in zip(bits, free)) for bits in product((0, 1), repeat=len(free)))
    passing, any_jacobi = [], False
    for x in candidates:
        bits = _bits_to_tuple(x, width)
        c, a = _signed(d, cmag, amag, bits)
        if not _jacobi_ok(jac, c):
            continue
        any_jacobi = True
        if _derivation_ok(der, positions, c, a):
            passing.append(x)
    if not passing:
        return "derivation-fail" if any_jacobi else "jacobi-fail"
    if exhaustive:
        if representatives:
            passing = sorted({f2_coset_min(x, red, pivots) for x in passing})
        return sorted((_bits_to_tuple(x, width) for x in passing), key=_lexkey)
    if not representatives:
        span = [0]
        for r in red:
            span += [s ^ r for s in span]
        passing = [x ^ s for x in passing for s in span]
    return sorted((_bits_to_tuple(x, width) for x in passing), key=_lexkey)


def _lexkey(t):
    return t


# -- one free parameter -------------------------------------------------------

@dataclass(frozen=True)
class ResolvedRoot:
    value: RadExt
    A: tuple[RadExt, ...]
    X: tuple[RadExt, ...]
    status: str  # "ok" or a rejection reason


def _poly_mul(p, q):
    out = [Q0] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] += x * y
    return out


def _roots(poly: Sequence[Fraction]) -> list[RadExt] | None:
    """Real roots of a polynomial of degree <= 2 (ascending coefficients); ``None`` if identically zero."""
    p = list(poly) + [Q0] * (3 - len(poly))
    if len(poly) > 3 and any(poly[3:]):
        raise ArithmeticError("degree > 2")
    c0, c1, c2 = p[:3]
    if c2 == 0:
        if c1 == 0:
            return None if c0 == 0 else []
        return [RadExt.coerce(-c0 / c1)]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    if disc == 0:
        return [RadExt.coerce(-c1 / (2 * c2))]
    s = rad_sqrt_of_rational(disc)
    return [(s * sgn - c1) / (2 * c2) for sgn in (-1, 1)]


def _eval(poly: Sequence[Fraction], x: RadExt) -> RadExt:
    out = ZERO
    for c in reversed(poly):
        out = out * x + c
    return out


def resolve_parameters(d: NiceDiagram, pairs: IndexSet, lam: Sequence[Fraction],
                       A_affine: tuple[Sequence[Fraction], Sequence[Fraction]],
                       X_affine: tuple[Sequence[Fraction], Sequence[Fraction]]) -> list[ResolvedRoot] | str:
    """Fix a single free parameter ``s`` from the squared derivation constraints.

    ``A_affine = (A0, A1)`` and ``X_affine = (X0, X1)`` give ``A = A0 + s A1``
    and ``X = X0 + s X1``. Every derivation equation with two live terms
    ``s1 a1 c1 + s2 a2 c2 = 0`` squares to ``|A1 x1| = |A2 x2|``; the two
    sign cases are quadratics in ``s``. Returns the candidate roots with a
    status each, or an ``unresolved-*`` reason.
    """
    A0, A1 = A_affine
    X0, X1 = X_affine
    positions = {(j, i): idx for idx, (i, j) in enumerate(pairs)}
    tr = sum(lam, Q0)
    constraints = []
    for eq in derivation_equations(d):
        live = [t for t in eq if t.pos in positions]
        if not live:
            continue
        if len(live) != 2:
            return "unresolved-three-term" if len(live) > 2 else "unresolved-single-term"
        sides = []
        for t in live:
            idx = positions[t.pos]
            sides.append(_poly_mul([A0[idx], A1[idx]], [X0[t.cls], X1[t.cls]]))
        constraints.append(tuple(sides))
    candidates: list[RadExt] | None = None
    for P, Q in constraints:
        minus = [p - q for p, q in zip(P, Q)]
        plus = [p + q for p, q in zip(P, Q)]
        r1, r2 = _roots(minus), _roots(plus)
        if r1 is None or r2 is None:
            continue  # holds for every s
        roots = []
        for r in r1 + r2:
            if r not in roots:
                roots.append(r)
        if candidates is None:
            candidates = roots
        else:
            candidates = [r for r in candidates if r in roots]
    if candidates is None:
        return "unresolved-parametric"
    for P, Q in constraints:
        candidates = [r for r in candidates if abs(_eval(P, r)) == abs(_eval(Q, r))]
    out = []
    for r in sorted(candidates):
        A = tuple(RadExt.coerce(a0) + r * a1 for a0, a1 in zip(A0, A1))
        X = tuple(RadExt.coerce(x0) + r * x1 for x0, x1 in zip(X0, X1))
        if any(not v for v in A):
            status = "zero-A"
        elif any(not x for x in X):
            status = "zero-x"
        elif not solve_epsilon(d, pairs, A, X, tr):
            status = "gf2-inconsistent"
        elif not r.is_rational():
            status = "unresolved-irrational"
        else:
            status = "ok"
        out.append(ResolvedRoot(r, A, X, status))
    return out


# -- equivalence ----------------------------------------------------------------

def act_on_record(rec: SolutionRecord, perm: Perm, delta: Sequence[int] | None = None) -> SolutionRecord:
    """Image of a record under ``(delta, f)``: flip ``e_i`` by ``delta_i``, then relabel ``i -> f(i)``."""
    d = rec.diagram
    n = d.n
    delta = delta or (1,) * n
    f = [perm[i] for i in range(n)]
    lam = [Q0] * n
    eps = [1] * n
    for i in range(n):
        lam[f[i] - 1] = rec.lam[i]
        eps[f[i] - 1] = rec.epsilon[i]
    d2 = d.relabel(tuple(f))
    c = [ZERO] * d2.m
    X = [Q0] * d2.m
    for (i, j, k), v, x in zip(d.classes, rec.c, rec.X or (Q0,) * d.m):
        fi, fj = f[i - 1], f[j - 1]
        idx = d2.class_index[frozenset((fi, fj))]
        c[idx] = v * (delta[i - 1] * delta[j - 1] * delta[k - 1] * (1 if fi < fj else -1))
        X[idx] = x
    moved = {(f[i - 1], f[j - 1]): (A, v * (delta[i - 1] * delta[j - 1]))
             for (i, j), A, v in zip(rec.pairs, rec.A, rec.a)}
    pairs = tuple(sorted(moved))
    return SolutionRecord(d2, pairs, tuple(lam), tuple(moved[p][0] for p in pairs),
                          tuple(X) if rec.X else (), tuple(c), tuple(moved[p][1] for p in pairs), tuple(eps))


def _sign_bits(rec: SolutionRecord) -> tuple[int, ...]:
    return tuple(1 if v.sign() > 0 else 0 for v in rec.c) + tuple(1 if v.sign() < 0 else 0 for v in rec.a)


def _values_key(rec: SolutionRecord) -> tuple:
    return (rec.pairs, rec.lam, rec.A,
            tuple(abs(v).sort_key() for v in rec.c), tuple(abs(v).sort_key() for v in rec.a))


def _with_bits(rec: SolutionRecord, bits: Sequence[int]) -> SolutionRecord:
    cmag = [abs(v) for v in rec.c]
    amag = [abs(v) for v in rec.a]
    c, a = _signed(rec.diagram, cmag, amag, bits)
    return SolutionRecord(rec.diagram, rec.pairs, rec.lam, rec.A, rec.X, c, a, rec.epsilon)


def canonical_record(rec: SolutionRecord, group: Sequence[Perm]) -> tuple[tuple, SolutionRecord]:
    """Lexicographically least image under ``Z_2^n x| group`` with ``group`` fixing the diagram and pairs.

    The key is ``(values, sign coset minimum, epsilon)``; sign flips only
    move the signs, within a coset of the gauge image.
    """
    d = rec.diagram
    width = d.m + len(rec.pairs)
    red, pivots = f2_rref(gauge_rows(d, rec.pairs), width)
    best = None
    for f in group:
        img = act_on_record(rec, f)
        if img.diagram.arrows != d.arrows or img.pairs != rec.pairs:
            raise ValueError("group element does not fix the diagram and index set")
        bits = _bits_to_tuple(f2_coset_min(_tuple_to_bits(_sign_bits(img)), red, pivots), width)
        key = (_values_key(img), bits, tuple(img.epsilon))
        if best is None or key < best[0]:
            best = (key, _with_bits(img, bits))
    return best


def orbit_reduce(records: Iterable[SolutionRecord], group: Sequence[Perm]) -> list[ClassRow]:
    """One row per orbit of ``(c, D)``; each row lists one record per orbit of signatures."""
    reps: dict[tuple, SolutionRecord] = {}
    for rec in records:
        key, rep = canonical_record(rec, group)
        reps.setdefault(key, rep)
    rows: dict[tuple, list[tuple]] = {}
    for key in sorted(reps):
        rows.setdefault(key[:2], []).append(key)
    return [ClassRow(tuple(reps[k] for k in keys)) for _, keys in sorted(rows.items())]


def equivalence_key(records: Sequence[SolutionRecord]) -> tuple:
    """Invariant of a row under every relabeling of the nodes and every sign change.

    Minimizes ``(classes, pairs, lambda, |c|, |a|, sign coset minimum)`` over
    all permutations and attaches the set of timelike index sets closed
    under the minimizing permutations. ``A`` and ``X`` are not used, so rows
    given only by their printed data can be compared.
    """
    rec0 = records[0]
    n = rec0.diagram.n
    scored = []
    for perm in permutations(range(1, n + 1)):
        img = act_on_record(rec0, perm)
        d = img.diagram
        width = d.m + len(img.pairs)
        red, pivots = f2_rref(gauge_rows(d, img.pairs), width)
        bits = _bits_to_tuple(f2_coset_min(_tuple_to_bits(_sign_bits(img)), red, pivots), width)
        key = (d.classes, img.pairs, img.lam,
               tuple(abs(v).sort_key() for v in img.c), tuple(abs(v).sort_key() for v in img.a), bits)
        scored.append((key, perm))
    best = min(k for k, _ in scored)
    sigs = set()
    for key, perm in scored:
        if key == best:
            for rec in records:
                eps = [1] * n
                for i, e in enumerate(rec.epsilon):
                    eps[perm[i] - 1] = e
                sigs.add(timelike_string(eps))
    return best, tuple(sorted(sigs))


# -- verification ---------------------------------------------------------------

def verify_record(rec: SolutionRecord) -> list[str]:
    """Independent checks through the metric Lie algebra; empty list when everything holds."""
    L = rec.algebra()
    D = rec.derivation()
    bad = []
    j = geometry.jacobi_check(L)
    if j is not None:
        bad.append(f"jacobi fails on {tuple(x + 1 for x in j)}")
        return bad
    p = geometry.is_derivation(L, D)
    if p is not None:
        bad.append(f"D is not a derivation on {tuple(x + 1 for x in p)}")
        return bad
    res = geometry.check_generalized_nilsoliton(L, D)
    if res:
        bad.append("generalized nilsoliton equation fails: " + ", ".join(sorted(res)))
    lam = geometry.einstein_check(geometry.extend(L, D))
    Ds = geometry.symmetric_part(L, D)
    expected = -geometry.trace(geometry.mat_mul(Ds, Ds))
    if lam is None:
        bad.append("extension is not Einstein")
    elif lam != expected:
        bad.append(f"Einstein constant {lam} differs from -Tr((D^s)^2) = {expected}")
    return bad


def einstein_constant(rec: SolutionRecord) -> RadExt | None:
    return geometry.einstein_check(geometry.extend(rec.algebra(), rec.derivation()))


# -- driver ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Options:
    require_surjective: bool = False
    require_unique_A: bool = False
    verify: bool = True


@dataclass
class TaskResult:
    rows: list[ClassRow] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)
    verification_failures: list[tuple[SolutionRecord, list[str]]] = field(default_factory=list)


def _records_for(t: NondiagonalTriple, X: tuple[Fraction, ...], rej) -> list[SolutionRecord]:
    d = t.diagram
    if any(v == 0 for v in t.A):
        rej("zero-A")
        return []
    if any(x == 0 for x in X):
        rej("zero-x")
        return []
    eps = solve_epsilon(d, t.pairs, t.A, X, t.trace)
    if not eps:
        rej("gf2-inconsistent")
        return []
    signs = solve_structure(t, X, representatives=True)
    if isinstance(signs, str):
        rej(signs)
        return []
    cmag, amag = magnitudes(t, X)
    out = []
    for bits in signs:
        c, a = _signed(d, cmag, amag, bits)
        for e in eps:
            out.append(SolutionRecord(d, t.pairs, t.lam, t.A, X, c, a, e))
    return out


def classify_index_set(d: NiceDiagram, pairs: IndexSet, group: Sequence[Perm] | None = None,
                       options: Options = Options()) -> TaskResult:
    """Classification for one diagram and one index set."""
    res = TaskResult()
    group = automorphism_group(d) if group is None else group
    pairs = tuple(sorted(pairs))

    def rej(reason: str, detail: str = "") -> None:
        res.rejections.append(Rejection(d, pairs, reason, detail))

    if options.require_unique_A and not n5_independent(d, pairs):
        rej("excluded-dependent-N5")
        return res
    out = solve_lambda_A(d, pairs)
    if out.kind == "rejected":
        rej(out.reason)
        return res
    if out.kind == "triple":
        lam, A0, dirs = out.triple.lam, out.triple.A, ()
    else:
        lam, A0, dirs = out.family.lam, out.family.A0, out.family.directions
    sol = x_system(d, pairs, lam, A0, dirs)
    if sol is None:
        rej("no-X")
        return res
    m = d.m

    def A_at(tvals):
        A = list(A0)
        for tk, v in zip(tvals, dirs):
            A = [x + tk * y for x, y in zip(A, v)]
        return tuple(A)

    records: list[SolutionRecord] = []
    if sol.dim == 0:
        X = tuple(sol.particular[:m])
        t = NondiagonalTriple(d, pairs, lam, A_at(sol.particular[m:]))
        records = _records_for(t, X, rej)
    elif sol.dim == 1:
        roots = _resolve_line(d, pairs, lam, A0, dirs, sol)
        if isinstance(roots, str):
            rej(roots)
            return res
        if not roots:
            rej("no-root")
        for r in roots:
            if r.status != "ok":
                rej(r.status, f"parameter {r.value}")
                continue
            A = tuple(v.to_fraction() for v in r.A)
            X = tuple(v.to_fraction() for v in r.X)
            records += _records_for(NondiagonalTriple(d, pairs, lam, A), X,
                                    lambda reason, detail="": rej(reason, f"parameter {r.value}"))
    else:
        rej("unresolved-parametric", f"{sol.dim} free parameters")
        return res
    if not records:
        return res
    res.rows = orbit_reduce(records, stabilizer(pairs, group))
    if options.verify:
        for row in res.rows:
            for rec in row.records:
                bad = verify_record(rec)
                if bad:
                    res.verification_failures.append((rec, bad))
    return res


def _resolve_line(d: NiceDiagram, pairs: IndexSet, lam, A0, dirs, sol) -> list[ResolvedRoot] | str:
    m = d.m
    base, direc = sol.particular, sol.basis[0]
    A0v = list(A0)
    for tk, v in zip(base[m:], dirs):
        A0v = [x + tk * y for x, y in zip(A0v, v)]
    A1v = tuple(sum((tk * v[idx] for tk, v in zip(direc[m:], dirs)), Q0) for idx in range(len(pairs)))
    return resolve_parameters(d, pairs, lam, (tuple(A0v), A1v), (base[:m], direc[:m]))


def parameter_roots(d: NiceDiagram, pairs: IndexSet) -> list[ResolvedRoot] | str:
    """Candidate roots for an index set whose Ricci system leaves one free parameter."""
    pairs = tuple(sorted(pairs))
    out = solve_lambda_A(d, pairs)
    if out.kind == "rejected":
        return out.reason
    if out.kind == "triple":
        lam, A0, dirs = out.triple.lam, out.triple.A, ()
    else:
        lam, A0, dirs = out.family.lam, out.family.A0, out.family.directions
    sol = x_system(d, pairs, lam, A0, dirs)
    if sol is None:
        return "no-X"
    if sol.dim != 1:
        raise ValueError(f"expected one free parameter, found {sol.dim}")
    return _resolve_line(d, pairs, lam, A0, dirs, sol)


def _task(args) -> tuple[int, TaskResult]:
    idx, d, pairs, group, options = args
    return idx, classify_index_set(d, pairs, group, options)


def default_threads() -> int:
    env = os.environ.get("SOLVCLASS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def run_algorithm1(diagrams: Sequence[NiceDiagram], options: Options = Options(),
                   threads: int | None = None) -> ClassificationReport:
    """Classify nondiagonal solutions over the given diagrams (one per isomorphism class)."""
    report = ClassificationReport()
    tasks = []
    for d in diagrams:
        if options.require_surjective and not is_surjective(d):
            report.rejections.append(Rejection(d, (), "excluded-non-surjective"))
            continue
        group = automorphism_group(d)
        cands = candidate_index_sets(d, group)
        if not cands:
            report.rejections.append(Rejection(d, (), "no-index-set"))
        for pairs in cands:
            tasks.append((len(tasks), d, pairs, group, options))
    threads = default_threads() if threads is None else max(1, threads)
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            results = dict(ex.map(_task, tasks, chunksize=1))
    else:
        results = dict(map(_task, tasks))
    for idx in range(len(tasks)):
        r = results[idx]
        report.rows += r.rows
        report.rejections += r.rejections
        report.verification_failures += r.verification_failures
    return report
