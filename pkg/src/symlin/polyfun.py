"""Polynomial symmetric functor sequences.

A multifunctor of ``k`` variables is modelled as a finite wedge of monomials
``(X_1, ..., X_k) -> A ^ X_1^d_1 ^ ... ^ X_k^d_k`` with ``A`` a finite pointed
set.  The symmetry isomorphisms of a level are recorded as an action of the
symmetric group on the points ``(term index, coefficient label)``; a
permutation must carry a term to a term whose exponents are permuted
accordingly.

Composition expands substitutions distributively.  Multilinearization at
``S^0`` keeps exactly the monomials with all exponents equal to one.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Mapping, Sequence

from .combinat import (
    Permutation,
    UnorderedPartition,
    adjacent_transposition,
    enumerate_partitions,
    enumerate_permutations,
    induced_block_data,
)
from .symseq import (
    BASEPOINT,
    OperadData,
    PointedSigmaSet,
    SymSeq,
    TruncationError,
    check_operad,
    compose_maps,
    compose_product,
    left_unitor,
    regroup,
    render,
    right_unitor,
    unit_seq,
)

__all__ = [
    "NotMultipointedError",
    "Monomial",
    "PolyMultiFun",
    "PolyFunSeq",
    "evaluate",
    "compose_funseq",
    "multilinearize_at_S0",
    "ChainRuleReport",
    "chain_rule_compare",
    "lax_associativity",
    "lax_unitality",
    "unit_funseq",
    "smash_powers",
    "from_operad",
    "builtin_examples",
    "term_signatures",
    "random_funseq",
]


class NotMultipointedError(ValueError):
    """A term is constant in some variable where pointedness is required."""


@dataclass(frozen=True)
class Monomial:
    coeff: tuple
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", tuple(self.coeff))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(set(self.coeff)) != len(self.coeff):
            raise ValueError(f"repeated coefficient labels {self.coeff}")
        if any(d < 0 for d in self.exponents):
            raise ValueError("exponents must be non-negative")

    @property
    def arity(self) -> int:
        return len(self.exponents)

    @property
    def multilinear(self) -> bool:
        return all(d == 1 for d in self.exponents)


def _default_action(terms: Sequence[Monomial]) -> Callable:
    # match the r-th copy of (coeff, sigma.exponents) with the r-th copy of (coeff, exponents)
    groups: dict[tuple, list[int]] = {}
    rank = []
    for t, term in enumerate(terms):
        members = groups.setdefault((term.coeff, term.exponents), [])
        rank.append(len(members))
        members.append(t)

    def action(sigma: Permutation, point):
        t, label = point
        term = terms[t]
        target = groups.get((term.coeff, sigma.apply(term.exponents)))
        if target is None or len(target) <= rank[t]:
            raise ValueError(f"term {t} has no partner under {sigma}")
        return target[rank[t]], label

    return action


@dataclass(frozen=True, eq=False)
class PolyMultiFun:
    """A finite wedge of monomials of a common arity, with its symmetry action.

    ``symmetry=None`` selects the action that permutes exponents and leaves
    coefficient labels alone.  ``keys`` optionally records where each term of a
    composite came from.
    """

    arity: int
    terms: tuple[Monomial, ...]
    symmetry: PointedSigmaSet | None = None
    keys: tuple | None = None
    _key_index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        for term in terms:
            if term.arity != self.arity:
                raise ValueError(f"term of arity {term.arity} in a level of arity {self.arity}")
        if self.symmetry is None:
            sym = PointedSigmaSet(self.arity, self.points(), _default_action(terms))
            for i in range(1, self.arity):
                s = adjacent_transposition(self.arity, i)
                for p in sym.elements:
                    sym.act(s, p)
            object.__setattr__(self, "symmetry", sym)
        elif self.symmetry.arity != self.arity:
            raise ValueError("symmetry action has the wrong arity")
        index = {}
        if self.keys is not None:
            if len(self.keys) != len(terms):
                raise ValueError("one provenance key per term is required")
            index = {key: t for t, key in enumerate(self.keys)}
        object.__setattr__(self, "_key_index", index)

    def points(self) -> tuple:
        return tuple((t, label) for t, term in enumerate(self.terms) for label in term.coeff)

    def term_for_key(self, key) -> int | None:
        return self._key_index.get(key)

    @classmethod
    def from_generators(cls, arity: int, terms: Sequence[Monomial], generators: Mapping[int, Mapping]) -> "PolyMultiFun":
        """Symmetry given by adjacent transpositions; unlisted points follow the default action."""
        base = cls(arity, tuple(terms))
        points = base.points()
        tables = {}
        for i in range(1, arity):
            s = adjacent_transposition(arity, i)
            table = {p: base.symmetry.act(s, p) for p in points}
            table.update(generators.get(i, {}))
            tables[i] = table
        return cls(arity, base.terms, PointedSigmaSet.from_generators(arity, points, tables))

    def is_multipointed(self) -> bool:
        return all(d >= 1 for term in self.terms for d in term.exponents)

    def symmetry_violations(self, perms: Sequence[Permutation] | None = None) -> list[tuple]:
        """Failures of exponent compatibility, label independence, or the action laws."""
        group = enumerate_permutations(self.arity) if perms is None else list(perms)
        out = []
        for sigma in group:
            targets: dict[int, set] = {}
            for t, label in self.symmetry.elements:
                t2, _ = self.symmetry.act(sigma, (t, label))
                targets.setdefault(t, set()).add(t2)
                if self.terms[t2].exponents != sigma.apply(self.terms[t].exponents):
                    out.append(("exponents", sigma, t))
            for t, ts in targets.items():
                if len(ts) != 1:
                    out.append(("label-dependent", sigma, t))
        out.extend(self.symmetry.action_violations(group))
        return out


@dataclass(frozen=True)
class PolyFunSeq:
    levels: tuple[PolyMultiFun, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        for n, lvl in enumerate(self.levels, start=1):
            if lvl.arity != n:
                raise ValueError(f"level {n} has arity {lvl.arity}")

    @property
    def max_level(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> PolyMultiFun:
        if not 1 <= n <= self.max_level:
            raise TruncationError(f"level {n} requested from a sequence truncated at {self.max_level}")
        return self.levels[n - 1]

    def is_multipointed(self) -> bool:
        return all(lvl.is_multipointed() for lvl in self.levels)


def evaluate(F: PolyMultiFun, inputs: Sequence[Sequence[Hashable]]) -> list[tuple]:
    """Evaluate on finite pointed sets given by their non-basepoint elements.

    Returns the non-basepoint elements of the wedge of smash products, each as
    ``(term index, coefficient label, factors)`` with ``factors[i]`` a
    ``d_i``-tuple of elements of ``inputs[i]``.
    """
    if len(inputs) != F.arity:
        raise ValueError(f"{len(inputs)} inputs for a functor of arity {F.arity}")
    out = []
    for t, term in enumerate(F.terms):
        powers = [list(itertools.product(X, repeat=d)) for X, d in zip(inputs, term.exponents)]
        for label in term.coeff:
            for factors in itertools.product(*powers):
                out.append((t, label, factors))
    return out


def _require_multipointed(F: PolyFunSeq, name: str) -> None:
    for lvl in F.levels:
        for t, term in enumerate(lvl.terms):
            if 0 in term.exponents:
                raise NotMultipointedError(
                    f"{name}: term {t} at level {lvl.arity} has exponents {term.exponents}; "
                    "every variable must occur"
                )


def compose_funseq(G: PolyFunSeq, F: PolyFunSeq, N: int) -> PolyFunSeq:
    """Levels ``1..N`` of the composite ``G o F``.

    Level ``n`` is the wedge, over ordered compositions ``(j_1, ..., j_k)`` of
    ``n`` and the shuffles placing them on the blocks of a set partition of
    ``[n]`` (blocks ordered by least element), of ``G_k`` with ``F_{j_i}``
    substituted into its ``i``-th variable.  A variable of exponent ``d``
    receives ``d`` independent copies.  ``F`` must be pointed in each variable;
    constant terms are allowed in ``G``.
    """
    if G.max_level < N or F.max_level < N:
        raise TruncationError(f"composition up to level {N} needs both sequences to reach it")
    _require_multipointed(F, "inner sequence")
    levels = []
    for n in range(1, N + 1):
        terms: list[Monomial] = []
        keys: list[tuple] = []
        for P in enumerate_partitions(n):
            Gk = G.level(P.size)
            Fs = [F.level(size) for size in P.sizes]
            for tg, gterm in enumerate(Gk.terms):
                choices = [
                    itertools.product(range(len(Fi.terms)), repeat=d) for Fi, d in zip(Fs, gterm.exponents)
                ]
                for slots in itertools.product(*choices):
                    terms.append(_substitute(n, P, gterm, Fs, slots))
                    keys.append((P, tg, slots))
        keys_t = tuple(keys)
        index = {key: t for t, key in enumerate(keys_t)}
        points = tuple((t, label) for t, term in enumerate(terms) for label in term.coeff)
        sym = PointedSigmaSet(n, points, _composite_action(G, F, keys_t, index))
        levels.append(PolyMultiFun(n, tuple(terms), sym, keys_t))
    return PolyFunSeq(tuple(levels))


def _substitute(n: int, P: UnorderedPartition, gterm: Monomial, Fs, slots) -> Monomial:
    exps = [0] * n
    factor_sets = [gterm.coeff]
    for block, Fi, copies in zip(P.blocks, Fs, slots):
        for t in copies:
            fterm = Fi.terms[t]
            factor_sets.append(fterm.coeff)
            for v, e in zip(block, fterm.exponents):
                exps[v - 1] += e
    sizes = [len(c) for c in slots]
    coeff = []
    for combo in itertools.product(*factor_sets):
        labels, pos = [], 1
        for d in sizes:
            labels.append(tuple(combo[pos:pos + d]))
            pos += d
        coeff.append((combo[0], tuple(labels)))
    return Monomial(tuple(coeff), tuple(exps))


def _composite_action(G: PolyFunSeq, F: PolyFunSeq, keys: tuple, index: dict) -> Callable:
    def action(sigma: Permutation, point):
        t, (g, flabels) = point
        P, tg, slots = keys[t]
        moved, tau, rhos = induced_block_data(sigma, P)
        tg2, g2 = G.level(P.size).symmetry.act(tau, (tg, g))
        new_slots = [None] * P.size
        new_labels = [None] * P.size
        for i, (rho, copies, labs) in enumerate(zip(rhos, slots, flabels)):
            sym = F.level(rho.size).symmetry
            images = [sym.act(rho, (tf, f)) for tf, f in zip(copies, labs)]
            new_slots[tau.mapping[i] - 1] = tuple(x[0] for x in images)
            new_labels[tau.mapping[i] - 1] = tuple(x[1] for x in images)
        t2 = index[(moved, tg2, tuple(new_slots))]
        return t2, (g2, tuple(new_labels))

    return action


def multilinearize_at_S0(F: PolyFunSeq) -> SymSeq:
    """Keep the coefficients of the monomials with all exponents one, with their induced action."""
    _require_multipointed(F, "multilinearization")
    levels = []
    for lvl in F.levels:
        points = tuple(p for p in lvl.symmetry.elements if lvl.terms[p[0]].multilinear)
        levels.append(PointedSigmaSet(lvl.arity, points, lvl.symmetry.action))
    return SymSeq(tuple(levels))


@dataclass
class ChainRuleReport:
    status: str
    levels: list[dict]
    flagged: list[dict]
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cardinalities": self.levels,
            "flagged": self.flagged,
            "counterexample": self.counterexample,
        }


def _mu(GF: PolyFunSeq, x):
    """The comparison map on one element of ``D G o D F``."""
    if x is BASEPOINT:
        return x
    tg, g = x.outer
    slots = tuple((tf,) for tf, _ in x.inner)
    t = GF.level(x.partition.ground).term_for_key((x.partition, tg, slots))
    if t is None:
        return None
    return t, (g, tuple((f,) for _, f in x.inner))


def _perms_for(n: int, exhaustive_upto: int) -> list[Permutation]:
    if n <= exhaustive_upto:
        return enumerate_permutations(n)
    return [adjacent_transposition(n, i) for i in range(1, n)]


def chain_rule_compare(G: PolyFunSeq, F: PolyFunSeq, N: int, exhaustive_upto: int = 4) -> ChainRuleReport:
    """Compare ``D G(S^0) o D F(S^0)`` with ``D (G o F)(S^0)`` through the element-level map.

    Equivariance is checked against every permutation up to arity
    ``exhaustive_upto`` and against the adjacent transpositions beyond it.
    """
    _require_multipointed(G, "outer sequence")
    DG, DF = multilinearize_at_S0(G), multilinearize_at_S0(F)
    GF = compose_funseq(G, F, N)
    lhs = compose_product(DG, DF, N)
    rhs = multilinearize_at_S0(GF)
    rows, flagged = [], []
    status, witness = "pass", None
    for n in range(1, N + 1):
        L, R = lhs.level(n), rhs.level(n)
        oracle = sum(
            len(DG.level(P.size)) * _prod(len(DF.level(s)) for s in P.sizes) for P in enumerate_partitions(n)
        )
        for P in enumerate_partitions(n):
            if len(DG.level(P.size)) and any(len(DF.level(s)) == 0 for s in P.sizes):
                flagged.append({"n": n, "partition": str(P)})
        mu = {x: _mu(GF, x) for x in L}
        image = set(mu.values())
        defined = None not in image
        bijective = defined and len(image) == len(L) and image == set(R.elements)
        equivariant = defined
        if defined:
            for sigma in _perms_for(n, exhaustive_upto):
                for x in L:
                    if mu[L.act(sigma, x)] != R.act(sigma, mu[x]):
                        equivariant = False
                        if witness is None:
                            witness = {"n": n, "law": "equivariance", "sigma": str(sigma), "element": str(x)}
                        break
                if not equivariant:
                    break
        if not bijective and witness is None:
            missing = sorted(map(render, set(R.elements) - image))
            witness = {"n": n, "law": "bijection", "unmatched": missing[:5]}
        ok = bijective and equivariant and len(L) == oracle == len(R)
        if not ok:
            status = "fail"
            if witness is None:
                witness = {"n": n, "law": "cardinality", "lhs": len(L), "rhs": len(R), "oracle": oracle}
        rows.append(
            {"n": n, "lhs": len(L), "rhs": len(R), "oracle": oracle, "bijective": bijective, "equivariant": equivariant}
        )
    return ChainRuleReport(status, rows, flagged, witness)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def lax_associativity(H: PolyFunSeq, G: PolyFunSeq, F: PolyFunSeq, N: int) -> dict:
    """Check that the comparison maps are associative.

    Both routes ``((DH o DG) o DF)(n) -> D(H o G o F)(n)`` are computed: through
    ``D(H o G) o DF`` on one side, and through the associator, ``DH o D(G o F)``
    on the other.  The two targets are identified by regrouping the provenance
    of each multilinear term.
    """
    for name, seq in (("H", H), ("G", G), ("F", F)):
        _require_multipointed(seq, name)
    DH, DG, DF = (multilinearize_at_S0(s) for s in (H, G, F))
    HG, GF = compose_funseq(H, G, N), compose_funseq(G, F, N)
    HG_F, H_GF = compose_funseq(HG, F, N), compose_funseq(H, GF, N)
    route_a = compose_maps(lambda y: _mu(HG, y), lambda y: y)
    route_b = compose_maps(lambda y: y, lambda y: _mu(GF, y))
    source = compose_product(compose_product(DH, DG, N), DF, N)
    checked = 0
    for n in range(1, N + 1):
        for x in source.level(n):
            checked += 1
            a = _mu(HG_F, route_a(x))
            b = _mu(H_GF, route_b(regroup(x)))
            if a is None or b is None or _regroup_ml(HG_F, H_GF, HG, GF, n, a) != b:
                return {"status": "fail", "checked": checked, "counterexample": str(x)}
    return {"status": "pass", "checked": checked, "counterexample": None}


def _regroup_ml(HG_F, H_GF, HG, GF, n: int, point):
    t, (hg_label, f_labels) = point
    P, t_hg, f_slots = HG_F.level(n).keys[t]
    Q, th, g_slots = HG.level(P.size).keys[t_hg]
    h, g_labels = hg_label
    coarse, inner_terms, inner_labels = [], [], []
    for q, (tg,), (g,) in zip(Q.blocks, g_slots, g_labels):
        merged = sorted(v for i in q for v in P.blocks[i - 1])
        rank = {v: r for r, v in enumerate(merged, start=1)}
        local = UnorderedPartition(len(merged), tuple(tuple(rank[v] for v in P.blocks[i - 1]) for i in q))
        key = (local, tg, tuple(f_slots[i - 1] for i in q))
        t_gf = GF.level(len(merged)).term_for_key(key)
        coarse.append(tuple(merged))
        inner_terms.append((t_gf,))
        inner_labels.append(((g, tuple(f_labels[i - 1] for i in q)),))
    R = UnorderedPartition(n, tuple(coarse))
    t2 = H_GF.level(n).term_for_key((R, th, tuple(inner_terms)))
    return t2, (h, tuple(inner_labels))


UNIT_LABEL = "1"


def unit_funseq(N: int) -> PolyFunSeq:
    """The identity at level one and the zero functor elsewhere."""
    return PolyFunSeq(
        tuple(
            PolyMultiFun(n, (Monomial((UNIT_LABEL,), (1,)),) if n == 1 else ()) for n in range(1, N + 1)
        )
    )


def lax_unitality(F: PolyFunSeq, N: int) -> dict:
    """Check both unit triangles for the comparison maps, with the unit ``S^0 -> D id(S^0)``."""
    _require_multipointed(F, "F")
    I = unit_funseq(N)
    DF = multilinearize_at_S0(F)
    one = unit_seq(N)
    eps = {UNIT_LABEL: (0, UNIT_LABEL)}
    IF, FI = compose_funseq(I, F, N), compose_funseq(F, I, N)
    checked = 0
    left = compose_maps(lambda y: eps[y], lambda y: y)
    for n in range(1, N + 1):
        for x in compose_product(one, DF, N).level(n):
            checked += 1
            t, (_, ((f,),)) = _mu(IF, left(x))
            _, _, ((tf,),) = IF.level(n).keys[t]
            if (tf, f) != left_unitor(x):
                return {"status": "fail", "checked": checked, "counterexample": str(x)}
    right = compose_maps(lambda y: y, lambda y: eps[y])
    for n in range(1, N + 1):
        for x in compose_product(DF, one, N).level(n):
            checked += 1
            t, (f, _) = _mu(FI, right(x))
            _, tf, _ = FI.level(n).keys[t]
            if (tf, f) != right_unitor(x):
                return {"status": "fail", "checked": checked, "counterexample": str(x)}
    return {"status": "pass", "checked": checked, "counterexample": None}


def smash_powers(N: int) -> PolyFunSeq:
    """``(X_1, ..., X_k) -> X_1 ^ ... ^ X_k`` at every level."""
    return PolyFunSeq(tuple(PolyMultiFun(k, (Monomial((UNIT_LABEL,), (1,) * k),)) for k in range(1, N + 1)))


def from_operad(O: OperadData, N: int) -> PolyFunSeq:
    """``(X_1, ..., X_k) -> O(k) ^ X_1 ^ ... ^ X_k``, symmetric through the action on ``O(k)``."""
    report = check_operad(O, N)
    if not report.passed:
        raise ValueError(f"operad data fails the {report.law} law at {report.counterexample}")
    levels = []
    for k in range(1, N + 1):
        lvl = O.seq.level(k)
        term = Monomial(lvl.elements, (1,) * k)
        points = tuple((0, a) for a in lvl.elements)
        sym = PointedSigmaSet(k, points, lambda sigma, p, lvl=lvl: (0, lvl.act(sigma, p[1])))
        levels.append(PolyMultiFun(k, (term,), sym))
    return PolyFunSeq(tuple(levels))


def builtin_examples(N: int = 4, operad: OperadData | None = None) -> list[PolyFunSeq]:
    out = [smash_powers(N)]
    if operad is not None:
        out.append(from_operad(operad, N))
    return out


def term_signatures(F: PolyMultiFun) -> Counter:
    """Multiset of ``(exponents, sorted leaf labels)`` over terms and coefficient labels."""
    out: Counter = Counter()
    for term in F.terms:
        for label in term.coeff:
            out[(term.exponents, tuple(sorted(_leaves(label))))] += 1
    return out


def _leaves(label):
    if isinstance(label, tuple):
        for v in label:
            yield from _leaves(v)
    else:
        yield label


def random_funseq(
    rng: random.Random,
    N: int,
    prefix: str = "a",
    max_orbits: int = 2,
    max_coeff: int = 2,
    max_exponent: int = 2,
    twisted: bool = True,
) -> PolyFunSeq:
    """A random multipointed sequence.

    Each level is a union of orbits of exponent vectors with entries in
    ``1..max_exponent``.  With ``twisted``, a two-point multilinear coefficient
    may carry the sign action.
    """
    levels = []
    for n in range(1, N + 1):
        terms: list[Monomial] = []
        twist: list[int] = []
        for o in range(rng.randint(0, max_orbits)):
            exps = tuple(sorted(rng.randint(1, max_exponent) for _ in range(n)))
            size = rng.randint(1, max_coeff)
            labels = tuple(f"{prefix}{n}.{o}.{c}" for c in range(size))
            for perm in sorted(set(itertools.permutations(exps))):
                terms.append(Monomial(labels, perm))
            if twisted and size == 2 and n >= 2 and all(e == 1 for e in exps) and rng.random() < 0.5:
                twist.append(len(terms) - 1)
        if twist:
            gens = {}
            for i in range(1, n):
                table = {}
                for t in twist:
                    a, b = terms[t].coeff
                    table[(t, a)] = (t, b)
                    table[(t, b)] = (t, a)
                gens[i] = table
            levels.append(PolyMultiFun.from_generators(n, terms, gens))
        else:
            levels.append(PolyMultiFun(n, tuple(terms)))
    return PolyFunSeq(tuple(levels))
