"""Small symmetric sequences shared by the tests.

Up to isomorphism a Sigma_n-set with at most two points is empty, one fixed
point, two fixed points, or the sign orbit, so ``all_small_seqs`` is complete
for sequences with at most two elements per level.
"""

import itertools
import random
from functools import lru_cache

from symlin.combinat import Permutation, adjacent_transposition, enumerate_permutations
from symlin.polyfun import Monomial, PolyFunSeq, PolyMultiFun
from symlin.symseq import BASEPOINT, PointedSigmaSet, SymSeq


@lru_cache(maxsize=None)
def parity(sigma: Permutation) -> int:
    m = sigma.mapping
    return sum(1 for i, j in itertools.combinations(range(len(m)), 2) if m[i] > m[j]) % 2


def sign_action(sigma, x):
    if parity(sigma) == 0:
        return x
    stem, s = x[:-1], x[-1]
    return stem + ("-" if s == "+" else "+")


def level_choices(n: int, name: str) -> list[PointedSigmaSet]:
    out = [
        PointedSigmaSet(n, ()),
        PointedSigmaSet(n, (f"{name}{n}",)),
        PointedSigmaSet(n, (f"{name}{n}a", f"{name}{n}b")),
    ]
    if n >= 2:
        out.append(PointedSigmaSet(n, (f"{name}{n}+", f"{name}{n}-"), sign_action))
    return out


def all_small_seqs(name: str, N: int) -> list[SymSeq]:
    return [SymSeq(c) for c in itertools.product(*(level_choices(n, name) for n in range(1, N + 1)))]


def random_small_seq(rng: random.Random, name: str, N: int) -> SymSeq:
    return SymSeq(tuple(rng.choice(level_choices(n, name)) for n in range(1, N + 1)))


def singleton_seq(name: str, N: int) -> SymSeq:
    return SymSeq(tuple(PointedSigmaSet(n, (f"{name}{n}",)) for n in range(1, N + 1)))


def partition_sum(A: SymSeq, B: SymSeq, n: int, partitions) -> int:
    total = 0
    for P in partitions:
        term = len(A.level(P.size))
        for size in P.sizes:
            term *= len(B.level(size))
        total += term
    return total


def generator_tables(level: PointedSigmaSet) -> list[dict]:
    gens = [adjacent_transposition(level.arity, i) for i in range(1, level.arity)]
    return [{x: level.act(s, x) for x in level} for s in gens]


def coxeter_violations(level: PointedSigmaSet) -> list[str]:
    """Closure, bijectivity and the Coxeter relations of the generator action on one level."""
    tables = generator_tables(level)
    elems = set(level.elements)
    bad = []
    for i, t in enumerate(tables, start=1):
        if set(t.values()) != elems:
            bad.append(f"s{i} not a bijection of the level")
            continue
        if any(t[t[x]] != x for x in elems):
            bad.append(f"s{i}^2")
    if bad:
        return bad
    for i, j in itertools.combinations(range(len(tables)), 2):
        a, b = tables[i], tables[j]
        if j == i + 1:
            if any(a[b[a[x]]] != b[a[b[x]]] for x in elems):
                bad.append(f"braid s{i + 1} s{j + 1}")
        elif any(a[b[x]] != b[a[x]] for x in elems):
            bad.append(f"commute s{i + 1} s{j + 1}")
    return bad


def action_law_violations(level: PointedSigmaSet) -> list[tuple]:
    """Complete check: identity, and act(s sigma) = act(s) act(sigma) for all generators s and all sigma."""
    n = level.arity
    bad = []
    ident = Permutation.identity(n)
    if any(level.act(ident, x) != x for x in level):
        bad.append(("identity",))
    gens = [adjacent_transposition(n, i) for i in range(1, n)]
    for sigma in enumerate_permutations(n):
        moved = {x: level.act(sigma, x) for x in level}
        if set(moved.values()) != set(level.elements):
            bad.append(("bijective", sigma))
        for s in gens:
            for x in level:
                if level.act(s * sigma, x) != level.act(s, moved[x]):
                    bad.append(("composition", s, sigma, x))
    return bad


def is_basepoint(x) -> bool:
    return x is BASEPOINT


def generator_action(lvl: PolyMultiFun) -> dict:
    """Adjacent-transposition tables of a functor level's symmetry."""
    n = lvl.arity
    return {i: {p: lvl.symmetry.act(adjacent_transposition(n, i), p) for p in lvl.symmetry.elements} for i in range(1, n)}


def with_linear(F: PolyFunSeq, prefix: str) -> PolyFunSeq:
    """Append a multilinear term to every level so that no comparison is vacuous."""
    levels = []
    for lvl in F.levels:
        terms = [*lvl.terms, Monomial((f"{prefix}{lvl.arity}.lin",), (1,) * lvl.arity)]
        levels.append(PolyMultiFun.from_generators(lvl.arity, terms, generator_action(lvl)))
    return PolyFunSeq(tuple(levels))
