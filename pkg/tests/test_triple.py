from __future__ import annotations

from fractions import Fraction as F

from solvclass.diagram import NiceDiagram, automorphism_group, enumerate_diagrams
from solvclass.triple import (NondiagonalTriple, candidate_index_sets, check_n_conditions, derivation_support,
                              n5_independent, nikolayevsky_diagonal, satisfies_n1_n3, solve_lambda_A, stabilizer)

HEIS = NiceDiagram.from_classes(3, [(1, 2, 3)])
D4 = NiceDiagram.from_classes(4, [(1, 2, 3), (1, 3, 4)])
D532 = NiceDiagram.from_classes(5, [(1, 2, 3), (1, 3, 4), (2, 3, 5)])


def test_derivation_support_heisenberg() -> None:
    # derivations of the Heisenberg algebra: e1, e2 map anywhere, e3 to a multiple of itself
    assert derivation_support(HEIS) == {(1, 2), (2, 1), (3, 1), (3, 2)}


def test_n1_n3() -> None:
    assert satisfies_n1_n3(D4, ((1, 2),))
    assert not satisfies_n1_n3(D4, ((1, 3),))  # e3 is already [e1, e2]
    assert not satisfies_n1_n3(D532, ((1, 2), (2, 4)))  # node 2 reused


def test_candidate_sets() -> None:
    assert candidate_index_sets(D4) == [((1, 2),), ((2, 4),)]
    assert candidate_index_sets(D532) == [((1, 5),), ((1, 2), (4, 5)), ((1, 5), (2, 4))]


def test_candidate_sets_are_orbit_representatives() -> None:
    for n in (4, 5):
        for d in enumerate_diagrams(n):
            G = automorphism_group(d)
            cands = candidate_index_sets(d, G)
            assert len(cands) == len(set(cands))
            for a in cands:
                assert satisfies_n1_n3(d, a)
                assert min(tuple(sorted((f[i - 1], f[j - 1]) for i, j in a)) for f in G) == a


def test_worked_example_lambda_and_A() -> None:
    out = solve_lambda_A(D4, ((1, 2),))
    assert out.kind == "triple"
    assert out.triple.lam == (F(28, 51), F(-7, 17), F(7, 51), F(35, 51))
    assert out.triple.A == (F(-11, 17),)
    assert check_n_conditions(out.triple) == []


def test_outcome_kinds_on_d532() -> None:
    kinds = {a: solve_lambda_A(D532, a) for a in candidate_index_sets(D532)}
    assert kinds[((1, 5),)].kind == "triple"
    assert kinds[((1, 5), (2, 4))].reason == "zero-trace"
    fam = kinds[((1, 2), (4, 5))].family
    assert fam is not None and len(fam.directions) == 1
    assert fam.lam == (F(15, 31), F(-10, 31), F(5, 31), F(20, 31), F(-5, 31))
    assert n5_independent(D532, ((1, 5),)) and not n5_independent(D532, ((1, 2), (4, 5)))


def test_check_n_conditions_flags_bad_data() -> None:
    t = solve_lambda_A(D4, ((1, 2),)).triple
    bad = NondiagonalTriple(D4, t.pairs, t.lam, (F(1),))
    assert "N4" in check_n_conditions(bad)
    shifted = NondiagonalTriple(D4, t.pairs, tuple(x + 1 for x in t.lam), t.A)
    assert check_n_conditions(shifted)


def test_nikolayevsky() -> None:
    assert nikolayevsky_diagonal(HEIS) == (F(2, 3), F(2, 3), F(4, 3))
    assert nikolayevsky_diagonal(D4) == (F(1, 3), F(2, 3), F(1), F(4, 3))


def test_stabilizer() -> None:
    G = automorphism_group(D532)
    assert len(stabilizer(((1, 2), (4, 5)), G)) == 1
    assert len(stabilizer(((1, 5), (2, 4)), G)) == 2


def test_trace_normalization_on_all_triples() -> None:
    count = 0
    for n in (3, 4, 5):
        for d in enumerate_diagrams(n):
            for a in candidate_index_sets(d):
                out = solve_lambda_A(d, a)
                lam = out.triple.lam if out.kind == "triple" else out.family.lam if out.family else None
                if lam is None or sum(lam) == 0:
                    continue
                # the index pairs are disjoint, so offdiagonal entries do not reach the diagonal of D^2
                assert sum(x * x for x in lam) == sum(lam)
                count += 1
    assert count > 20


def test_solve_is_automorphism_equivariant() -> None:
    f = (2, 1, 3, 5, 4)
    image = tuple(sorted((f[i - 1], f[j - 1]) for i, j in ((1, 5),)))
    x, y = solve_lambda_A(D532, ((1, 5),)), solve_lambda_A(D532, image)
    assert tuple(x.triple.lam[f.index(k + 1)] for k in range(5)) == y.triple.lam
