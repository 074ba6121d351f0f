"""Nice diagrams: validation, root matrices, automorphisms and enumeration.

Nodes are labelled ``1..n``. An arrow ``(i, j, k)`` means ``i --j--> k``,
i.e. ``[e_i, e_j]`` is a nonzero multiple of ``e_k``. A diagram stores the
symmetric closure, but most code works with the *arrow classes*
``{i, j} -> k`` (``i < j``), ordered by ``(k, i, j)``; that order fixes the
rows of the root matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, permutations, product
from pathlib import Path
from typing import Iterable, Sequence

from .exactnum import RadExt
from .linalg import F2Matrix, RatMatrix

Arrow = tuple[int, int, int]
Perm = tuple[int, ...]  # perm[i - 1] is the image of node i


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class NiceDiagram:
    n: int
    arrows: frozenset[Arrow]

    @classmethod
    def from_classes(cls, n: int, classes: Iterable[Sequence[int]]) -> NiceDiagram:
        """Build from unordered classes ``(i, j, k)``, applying the symmetry closure."""
        arrows = set()
        for i, j, k in classes:
            arrows.add((i, j, k))
            arrows.add((j, i, k))
        return cls(n, frozenset(arrows))

    @classmethod
    def from_json(cls, data: dict | str | Path) -> NiceDiagram:
        if isinstance(data, Path) or (isinstance(data, str) and not data.lstrip().startswith("{")):
            data = json.loads(Path(data).read_text())
        elif isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            classes = [tuple(int(x) for x in a) for a in data["arrows"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DiagramError(f"malformed diagram: {exc}") from exc
        if any(len(a) != 3 for a in classes):
            raise DiagramError("every arrow needs three entries [i, j, k]")
        return cls.from_classes(n, classes)

    def to_json(self) -> dict:
        return {"n": self.n, "arrows": [list(a) for a in self.classes]}

    @cached_property
    def classes(self) -> tuple[Arrow, ...]:
        cl = {(min(i, j), max(i, j), k) for i, j, k in self.arrows}
        return tuple(sorted(cl, key=lambda a: (a[2], a[0], a[1])))

    @cached_property
    def class_index(self) -> dict[frozenset, int]:
        return {frozenset(a[:2]): idx for idx, a in enumerate(self.classes)}

    @cached_property
    def target(self) -> dict[tuple[int, int], int]:
        """``(i, j) -> k`` for every arrow (both orders)."""
        return {(i, j): k for i, j, k in self.arrows}

    @property
    def m(self) -> int:
        return len(self.classes)

    def __str__(self) -> str:
        if not self.classes:
            return f"n={self.n}: no arrows"
        return f"n={self.n}: " + " ".join(f"{i}{j}>{k}" for i, j, k in self.classes)

    def relabel(self, perm: Perm) -> NiceDiagram:
        return NiceDiagram(self.n, frozenset((perm[i - 1], perm[j - 1], perm[k - 1]) for i, j, k in self.arrows))


def _jacobi_chains(d: NiceDiagram) -> Iterable[tuple[tuple[int, int, int], int, int]]:
    """Yield ``(triple, target, chain count)`` for each target reachable by a double bracket."""
    t = d.target
    for trio in combinations(range(1, d.n + 1), 3):
        counts: dict[int, int] = {}
        a, b, c = trio
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            p = t.get((x, y))
            if p is None or p == z:
                continue
            q = t.get((p, z))
            if q is not None:
                counts[q] = counts.get(q, 0) + 1
        for q, cnt in counts.items():
            yield trio, q, cnt


def jacobi_terms(d: NiceDiagram) -> list[list[tuple[int, int, int]]]:
    """Jacobi identity as equations ``sum sign * c[I1] * c[I2] = 0`` in the class constants.

    Uses ``[e_i, e_j] = c e_k`` for ``i < j``; each equation collects the
    double-bracket chains of one triple of nodes landing on one target.
    """
    t = d.target
    out = []
    for trio in combinations(range(1, d.n + 1), 3):
        a, b, c = trio
        per_q: dict[int, list[tuple[int, int, int]]] = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            p = t.get((x, y))
            if p is None or p == z:
                continue
            q = t.get((p, z))
            if q is None:
                continue
            sign = (1 if x < y else -1) * (1 if p < z else -1)
            per_q.setdefault(q, []).append(
                (sign, d.class_index[frozenset((x, y))], d.class_index[frozenset((p, z))]))
        out.extend(per_q[q] for q in sorted(per_q))
    return out


def validate(d: NiceDiagram) -> str | None:
    """Return ``None`` for a valid nice diagram, otherwise the first violated axiom."""
    for i, j, k in sorted(d.arrows):
        if not all(1 <= x <= d.n for x in (i, j, k)):
            return f"node out of range in arrow {i}-{j}->{k}"
        if len({i, j, k}) != 3:
            return f"arrow {i}-{j}->{k} has repeated nodes"
    for i, j, k in sorted(d.arrows):
        if (j, i, k) not in d.arrows:
            return f"symmetry: {i}-{j}->{k} present but {j}-{i}->{k} missing"
    seen_target: dict[tuple[int, int], int] = {}
    seen_label: dict[tuple[int, int], int] = {}
    for i, j, k in sorted(d.arrows):
        if seen_target.setdefault((i, j), k) != k:
            return f"uniqueness: two arrows from {i} with label {j}"
        if seen_label.setdefault((i, k), j) != j:
            return f"uniqueness: two arrows {i}->{k} with different labels"
    # acyclicity of the node relation i -> k
    succ: dict[int, set[int]] = {v: set() for v in range(1, d.n + 1)}
    for i, _, k in d.arrows:
        succ[i].add(k)
    state: dict[int, int] = {}

    def cyclic(v: int) -> bool:
        state[v] = 1
        for w in succ[v]:
            if state.get(w) == 1 or (w not in state and cyclic(w)):
                return True
        state[v] = 2
        return False

    for v in range(1, d.n + 1):
        if v not in state and cyclic(v):
            return "acyclicity: the graph has a directed cycle"
    for trio, q, cnt in _jacobi_chains(d):
        if cnt == 1:
            return f"jacobi: a single bracket chain from {trio} lands on {q}"
    return None


def root_matrix(d: NiceDiagram) -> RatMatrix:
    rows = []
    for i, j, k in d.classes:
        r = [Fraction(0)] * d.n
        r[i - 1] = r[j - 1] = Fraction(-1)
        r[k - 1] = Fraction(1)
        rows.append(r)
    return RatMatrix.of(rows, d.n)


def root_matrix_mod2(d: NiceDiagram) -> F2Matrix:
    return root_matrix(d).mod2()


def is_surjective(d: NiceDiagram) -> bool:
    return root_matrix(d).rank() == d.m


def exp_root_action(d: NiceDiagram, g: Sequence) -> list:
    """Componentwise ``g_k / (g_i g_j)`` per arrow class."""
    if any(x == 0 for x in g):
        raise ValueError("exp_root_action needs nonzero entries")
    out = []
    for i, j, k in d.classes:
        gi, gj, gk = g[i - 1], g[j - 1], g[k - 1]
        if isinstance(gi, RadExt) or isinstance(gj, RadExt) or isinstance(gk, RadExt):
            out.append(RadExt.coerce(gk) / (RadExt.coerce(gi) * gj))
        else:
            out.append(Fraction(gk) / (Fraction(gi) * gj))
    return out


def _node_invariant(d: NiceDiagram, v: int) -> tuple:
    out_targets = sum(1 for i, _, _ in d.arrows if i == v)
    as_target = sum(1 for _, _, k in d.arrows if k == v)
    return out_targets, as_target


def automorphism_group(d: NiceDiagram) -> list[Perm]:
    """All node permutations preserving the arrow set, found by backtracking."""
    n = d.n
    inv = [_node_invariant(d, v) for v in range(1, n + 1)]
    arrows = d.arrows
    by_max: dict[int, list[Arrow]] = {}
    for a in arrows:
        by_max.setdefault(max(a), []).append(a)
    result: list[Perm] = []
    image = [0] * (n + 1)
    used = [False] * (n + 1)

    def extend(v: int) -> None:
        if v > n:
            result.append(tuple(image[1:]))
            return
        for w in range(1, n + 1):
            if used[w] or inv[w - 1] != inv[v - 1]:
                continue
            image[v] = w
            ok = all((image[a], image[b], image[c]) in arrows for a, b, c in by_max.get(v, ()))
            if ok:
                used[w] = True
                extend(v + 1)
                used[w] = False
        image[v] = 0

    extend(1)
    return result


def canonical_form(d: NiceDiagram) -> tuple[Arrow, ...]:
    """Lexicographically minimal sorted class list over all relabelings."""
    best = None
    for perm in permutations(range(1, d.n + 1)):
        key = tuple(sorted(
            (min(perm[i - 1], perm[j - 1]), max(perm[i - 1], perm[j - 1]), perm[k - 1])
            for i, j, k in d.classes))
        if best is None or key < best:
            best = key
    return best


def canonical_diagram(d: NiceDiagram) -> NiceDiagram:
    return NiceDiagram.from_classes(d.n, canonical_form(d))


def _valid_ordered_diagrams(n: int):
    # WLOG (up to relabeling by a topological order) every class {i,j}->k has k > max(i, j)
    pairs = list(combinations(range(1, n + 1), 2))
    choices = [[None] + list(range(j + 1, n + 1)) for _, j in pairs]
    for assign in product(*choices):
        classes = [(i, j, k) for (i, j), k in zip(pairs, assign) if k is not None]
        d = NiceDiagram.from_classes(n, classes)
        if validate(d) is None:
            yield d


def enumerate_diagrams(n: int, *, topological: bool = True) -> list[NiceDiagram]:
    """One nice diagram per isomorphism class on ``n <= 5`` nodes.

    With ``topological=False`` the search runs over every assignment of a
    target (or none) to every node pair; the default restricts to labelings
    compatible with a topological order, which reaches every class.
    """
    if n > 5:
        raise ValueError("built-in enumeration supports n <= 5; supply diagram files instead")
    if n < 1:
        raise ValueError("n must be positive")
    if topological:
        candidates = _valid_ordered_diagrams(n)
    else:
        pairs = list(combinations(range(1, n + 1), 2))
        choices = [[None] + [k for k in range(1, n + 1) if k not in p] for p in pairs]
        candidates = (d for d in (
            NiceDiagram.from_classes(n, [(i, j, k) for (i, j), k in zip(pairs, assign) if k is not None])
            for assign in product(*choices)) if validate(d) is None)
    forms = {canonical_form(d) for d in candidates}
    return [NiceDiagram.from_classes(n, f) for f in sorted(forms, key=lambda f: (len(f), f))]

