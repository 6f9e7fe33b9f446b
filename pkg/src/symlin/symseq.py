"""Symmetric sequences of finite pointed sets and their composition product.

A level ``A(n)`` is stored as its non-basepoint elements together with an
action of the symmetric group; the basepoint is the shared sentinel
:data:`BASEPOINT`, fixed by every permutation and absorbing under smash.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, Sequence

from .combinat import (
    Permutation,
    UnorderedPartition,
    adjacent_transposition,
    block_permutation,
    direct_sum,
    enumerate_compositions,
    enumerate_partitions,
    enumerate_permutations,
    extend_generator_action,
    induced_block_data,
)

__all__ = [
    "BASEPOINT",
    "TruncationError",
    "IncompleteDataError",
    "PointedSigmaSet",
    "SymSeq",
    "CompositeElement",
    "OperadData",
    "OperadReport",
    "compose_product",
    "unit_seq",
    "act",
    "regroup",
    "associator",
    "compose_maps",
    "left_unitor",
    "right_unitor",
    "check_operad",
    "com_operad",
    "ass_operad",
    "structure_map",
    "render",
]


class _Basepoint:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    def __reduce__(self):
        return (_Basepoint, ())


BASEPOINT = _Basepoint()


class TruncationError(ValueError):
    """A level beyond the stored truncation was required."""


class IncompleteDataError(ValueError):
    """An operad composition table lacks an entry."""


Action = Callable[[Permutation, Hashable], Hashable]


@dataclass(frozen=True, eq=False)
class PointedSigmaSet:
    """A finite pointed set with an action of the symmetric group on ``[arity]``.

    ``action`` is only ever called on non-basepoint elements.  ``None`` means the
    trivial action.
    """

    arity: int
    elements: tuple
    action: Action | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        index = {x: i for i, x in enumerate(self.elements)}
        if len(index) != len(self.elements):
            raise ValueError(f"repeated elements at arity {self.arity}")
        if BASEPOINT in index:
            raise ValueError("the basepoint is implicit and may not be listed")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._index

    def act(self, sigma: Permutation, x):
        if sigma.size != self.arity:
            raise ValueError(f"permutation of size {sigma.size} acting at arity {self.arity}")
        if x is BASEPOINT or self.action is None:
            return x
        return self.action(sigma, x)

    @classmethod
    def from_generators(cls, arity: int, elements: Sequence, generators: Mapping[int, Mapping]) -> "PointedSigmaSet":
        """Build from the action of adjacent transpositions, validating the relations."""
        table = extend_generator_action(arity, generators, elements)
        return cls(arity, tuple(elements), lambda sigma, x: table[sigma][x])

    def generator_tables(self) -> dict[int, dict]:
        """Action of each adjacent transposition, listing only moved elements."""
        out = {}
        for i in range(1, self.arity):
            s = adjacent_transposition(self.arity, i)
            moved = {x: self.act(s, x) for x in self.elements}
            moved = {x: y for x, y in moved.items() if y != x}
            if moved:
                out[i] = moved
        return out

    def action_violations(self, perms: Sequence[Permutation] | None = None) -> Iterator[tuple]:
        """Yield ``(law, witness)`` for every failure of the group-action laws."""
        group = enumerate_permutations(self.arity) if perms is None else list(perms)
        ident = Permutation.identity(self.arity)
        for x in self.elements:
            if self.act(ident, x) != x:
                yield ("identity", (x,))
            for sigma in group:
                y = self.act(sigma, x)
                if y not in self._index:
                    yield ("closure", (sigma, x))
        for sigma in group:
            image = {self.act(sigma, x) for x in self.elements}
            if len(image) != len(self.elements):
                yield ("bijective", (sigma,))
            for rho in group:
                rs = rho * sigma
                for x in self.elements:
                    if self.act(rs, x) != self.act(rho, self.act(sigma, x)):
                        yield ("composition", (rho, sigma, x))


@dataclass(frozen=True)
class SymSeq:
    """Levels ``1..max_level`` of a symmetric sequence."""

    levels: tuple[PointedSigmaSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        for n, lvl in enumerate(self.levels, start=1):
            if lvl.arity != n:
                raise ValueError(f"level {n} has arity {lvl.arity}")

    @property
    def max_level(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> PointedSigmaSet:
        if not 1 <= n <= self.max_level:
            raise TruncationError(f"level {n} requested from a sequence truncated at {self.max_level}")
        return self.levels[n - 1]

    def counts(self) -> list[int]:
        return [len(lvl) for lvl in self.levels]

    def truncate(self, n: int) -> "SymSeq":
        if n > self.max_level:
            raise TruncationError(f"cannot extend a sequence truncated at {self.max_level} to {n}")
        return SymSeq(self.levels[:n])


@dataclass(frozen=True)
class CompositeElement:
    """A non-basepoint element of ``A(k) ^ B(n_1) ^ ... ^ B(n_k)`` in the summand of ``partition``."""

    partition: UnorderedPartition
    outer: Hashable
    inner: tuple

    def __post_init__(self):
        # elements are hashed constantly while checking actions
        object.__setattr__(self, "_hash", hash((self.partition, self.outer, self.inner)))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return f"[{self.partition};{render(self.outer)};" + ",".join(render(b) for b in self.inner) + "]"


def render(x) -> str:
    """A deterministic string for an element, used for JSON output."""
    if isinstance(x, str):
        return x
    if x is BASEPOINT:
        return "*"
    if isinstance(x, tuple):
        return "(" + ",".join(render(v) for v in x) + ")"
    return str(x)


def act(A: SymSeq, B: SymSeq, sigma: Permutation, x):
    """The action on ``(A o B)(n)`` induced by moving partition blocks."""
    if x is BASEPOINT:
        return x
    moved, tau, rhos = induced_block_data(sigma, x.partition)
    outer = A.level(len(rhos)).act(tau, x.outer)
    inner = [None] * len(x.inner)
    for pos, rho, b in zip(tau.mapping, rhos, x.inner):
        inner[pos - 1] = B.levels[len(rho.mapping) - 1].act(rho, b)
    return CompositeElement(moved, outer, tuple(inner))


def _composite_elements(A: SymSeq, B: SymSeq, n: int) -> list[CompositeElement]:
    out = []
    for P in enumerate_partitions(n):
        outers = A.level(P.size).elements
        if not outers:
            continue
        inners = [B.level(size).elements for size in P.sizes]
        for a in outers:
            for bs in itertools.product(*inners):
                out.append(CompositeElement(P, a, bs))
    return out


def compose_product(A: SymSeq, B: SymSeq, N: int) -> SymSeq:
    """Levels ``1..N`` of the composition product ``A o B``."""
    if N < 1:
        raise ValueError("N must be positive")
    if A.max_level < N or B.max_level < N:
        raise TruncationError(f"composition up to level {N} needs both sequences to reach it")
    levels = []
    for n in range(1, N + 1):
        levels.append(PointedSigmaSet(n, _composite_elements(A, B, n), lambda s, x: act(A, B, s, x)))
    return SymSeq(tuple(levels))


UNIT = "1"


def unit_seq(N: int) -> SymSeq:
    if N < 1:
        raise ValueError("N must be positive")
    return SymSeq(tuple(PointedSigmaSet(n, (UNIT,) if n == 1 else ()) for n in range(1, N + 1)))


def regroup(x):
    """Rewrite an element of ``((A o B) o C)(n)`` as an element of ``(A o (B o C))(n)``.

    A partition of ``[n]`` whose blocks are grouped by a partition of the block
    set becomes a coarse partition together with, for each coarse block, the
    induced partition of that block.
    """
    if x is BASEPOINT or x.outer is BASEPOINT:
        return BASEPOINT
    P, ab, cs = x.partition, x.outer, x.inner
    Q = ab.partition
    coarse = []
    inner = []
    for q, b in zip(Q.blocks, ab.inner):
        merged = sorted(v for i in q for v in P.blocks[i - 1])
        rank = {v: r for r, v in enumerate(merged, start=1)}
        local = UnorderedPartition(len(merged), tuple(tuple(rank[v] for v in P.blocks[i - 1]) for i in q))
        coarse.append(tuple(merged))
        inner.append(CompositeElement(local, b, tuple(cs[i - 1] for i in q)))
    R = UnorderedPartition(P.ground, tuple(coarse))
    return CompositeElement(R, ab.outer, tuple(inner))


def associator(A: SymSeq, B: SymSeq, C: SymSeq, N: int) -> list[dict]:
    """Level-wise bijections ``((A o B) o C)(n) -> (A o (B o C))(n)`` for ``n <= N``.

    Raises ``ValueError`` if a regrouped family fails to be a bijection onto the
    target level.
    """
    left = compose_product(compose_product(A, B, N), C, N)
    right = compose_product(A, compose_product(B, C, N), N)
    out = []
    for n in range(1, N + 1):
        mapping = {x: regroup(x) for x in left.level(n)}
        target = right.level(n)
        image = set(mapping.values())
        if len(image) != len(mapping) or image != set(target.elements):
            raise ValueError(f"regrouping is not a bijection at level {n}")
        out.append(mapping)
    return out


def compose_maps(f: Callable, g: Callable) -> Callable:
    """Functoriality of the composition product on level-preserving maps."""

    def h(x):
        if x is BASEPOINT:
            return x
        a = f(x.outer)
        bs = tuple(g(b) for b in x.inner)
        if a is BASEPOINT or any(b is BASEPOINT for b in bs):
            return BASEPOINT
        return CompositeElement(x.partition, a, bs)

    return h


def left_unitor(x):
    """``(1 o A)(n) -> A(n)``."""
    return x if x is BASEPOINT else x.inner[0]


def right_unitor(x):
    """``(A o 1)(n) -> A(n)``."""
    return x if x is BASEPOINT else x.outer


@dataclass(frozen=True, eq=False)
class OperadData:
    """A candidate operad given by finite composition tables.

    ``gamma[(k, parts)]`` maps tuples ``(a, b_1, ..., b_k)`` of non-basepoint
    elements to an element of level ``sum(parts)`` or :data:`BASEPOINT`.
    """

    seq: SymSeq
    unit: Hashable
    gamma: Mapping[tuple[int, tuple[int, ...]], Mapping[tuple, Hashable]]

    def compose(self, a, bs: Sequence, parts: Sequence[int]):
        """``gamma(a; b_1, ..., b_k)`` where ``b_i`` lies in level ``parts[i]``."""
        if a is BASEPOINT or any(b is BASEPOINT for b in bs):
            return BASEPOINT
        try:
            return self.gamma[(len(bs), tuple(parts))][(a, *bs)]
        except KeyError:
            raise IncompleteDataError(f"no composition entry for {(a, *bs)} with parts {tuple(parts)}") from None

    def with_entry(self, key, inputs, output) -> "OperadData":
        """A copy with a single table entry replaced."""
        gamma = {s: dict(t) for s, t in self.gamma.items()}
        gamma[key][inputs] = output
        return OperadData(self.seq, self.unit, gamma)


@dataclass
class OperadReport:
    status: str
    checked: int
    law: str | None = None
    counterexample: tuple | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "checked": self.checked,
            "law": self.law,
            "counterexample": None if self.counterexample is None else [render_witness(v) for v in self.counterexample],
        }


def render_witness(v):
    if isinstance(v, Permutation):
        return "perm:" + str(v)
    if isinstance(v, (list, tuple)):
        return [render_witness(u) for u in v]
    return render(v)


def _shapes(N: int) -> Iterator[tuple[int, tuple[int, ...]]]:
    for total in range(1, N + 1):
        for k in range(1, total + 1):
            for comp in enumerate_compositions(total, k):
                yield k, comp.parts


def _tuples(O: OperadData, k: int, parts: Sequence[int]) -> Iterator[tuple]:
    yield from itertools.product(O.seq.level(k).elements, *(O.seq.level(j).elements for j in parts))


def _validate_tables(O: OperadData, N: int) -> None:
    if O.unit not in O.seq.level(1):
        raise IncompleteDataError(f"unit {O.unit!r} is not an element of level 1")
    for k, parts in _shapes(N):
        table = O.gamma.get((k, parts))
        target = O.seq.level(sum(parts))
        for tup in _tuples(O, k, parts):
            if table is None or tup not in table:
                raise IncompleteDataError(f"missing composition entry {tup} for shape {(k, parts)}")
            out = table[tup]
            if out is not BASEPOINT and out not in target:
                raise IncompleteDataError(f"entry {tup} lands outside level {sum(parts)}")


def check_operad(O: OperadData, N: int) -> OperadReport:
    """Exhaustively check unit, associativity and equivariance laws up to arity ``N``.

    Stops at the first failure, scanning laws in a fixed order and tuples in
    enumeration order.
    """
    if O.seq.max_level < N:
        raise TruncationError(f"operad data only reaches level {O.seq.max_level}")
    _validate_tables(O, N)
    checked = 0
    seq, u = O.seq, O.unit

    for n in range(1, N + 1):
        for x in seq.level(n):
            checked += 1
            if O.compose(u, (x,), (n,)) != x:
                return OperadReport("fail", checked, "unit-left", (u, x))
            if O.compose(x, (u,) * n, (1,) * n) != x:
                return OperadReport("fail", checked, "unit-right", (x,))

    for k, parts in _shapes(N):
        m = sum(parts)
        for outer_parts in _inner_shapes(m, N):
            cs_levels = [seq.level(j).elements for j in outer_parts]
            for tup in _tuples(O, k, parts):
                a, bs = tup[0], tup[1:]
                ab = O.compose(a, bs, parts)
                for cs in itertools.product(*cs_levels):
                    checked += 1
                    lhs = O.compose(ab, cs, outer_parts)
                    grouped, sizes, pos = [], [], 0
                    for b, j in zip(bs, parts):
                        grouped.append(O.compose(b, cs[pos:pos + j], outer_parts[pos:pos + j]))
                        sizes.append(sum(outer_parts[pos:pos + j]))
                        pos += j
                    rhs = O.compose(a, grouped, sizes)
                    if lhs != rhs:
                        return OperadReport("fail", checked, "associativity", (a, tuple(bs), tuple(cs)))

    for k, parts in _shapes(N):
        perms_k = enumerate_permutations(k)
        for tup in _tuples(O, k, parts):
            a, bs = tup[0], tup[1:]
            base = O.compose(a, bs, parts)
            for sigma in perms_k:
                checked += 1
                lhs = O.compose(seq.level(k).act(sigma, a), sigma.apply(bs), sigma.apply(parts))
                rhs = seq.level(sum(parts)).act(block_permutation(sigma, parts), base)
                if lhs != rhs:
                    return OperadReport("fail", checked, "equivariance-block", (sigma, a, tuple(bs)))

    for k, parts in _shapes(N):
        inner_groups = list(itertools.product(*(enumerate_permutations(j) for j in parts)))
        for tup in _tuples(O, k, parts):
            a, bs = tup[0], tup[1:]
            base = O.compose(a, bs, parts)
            for taus in inner_groups:
                checked += 1
                moved = tuple(seq.level(j).act(t, b) for t, j, b in zip(taus, parts, bs))
                lhs = O.compose(a, moved, parts)
                rhs = seq.level(sum(parts)).act(direct_sum(taus), base)
                if lhs != rhs:
                    return OperadReport("fail", checked, "equivariance-inner", (tuple(taus), a, tuple(bs)))

    return OperadReport("pass", checked)


def _inner_shapes(m: int, N: int) -> Iterator[tuple[int, ...]]:
    # arities (l_1..l_m) of the third layer, with total at most N
    for total in range(m, N + 1):
        for comp in enumerate_compositions(total, m):
            yield comp.parts


def com_operad(N: int) -> OperadData:
    """The commutative operad: one element per level, trivial actions."""
    levels = tuple(PointedSigmaSet(n, (f"c{n}",)) for n in range(1, N + 1))
    gamma = {}
    for k, parts in _shapes(N):
        gamma[(k, parts)] = {(f"c{k}", *(f"c{j}" for j in parts)): f"c{sum(parts)}"}
    return OperadData(SymSeq(levels), "c1", gamma)


def _word_action(sigma: Permutation, w: str) -> str:
    return "".join(str(sigma(int(c))) for c in w)


def ass_operad(N: int) -> OperadData:
    """The associative operad: level ``n`` is the set of orderings of ``[n]``.

    An ordering is written as a word such as ``"312"``; permutations act on the
    letters and composition substitutes shifted words for letters.
    """
    if N > 9:
        raise ValueError("word labels support arity at most 9")
    levels = []
    for n in range(1, N + 1):
        words = tuple("".join(map(str, p)) for p in itertools.permutations(range(1, n + 1)))
        levels.append(PointedSigmaSet(n, words, _word_action))
    seq = SymSeq(tuple(levels))
    gamma = {}
    for k, parts in _shapes(N):
        offsets = list(itertools.accumulate([0, *parts[:-1]]))
        table = {}
        for tup in _tuples(OperadData(seq, "1", {}), k, parts):
            w, vs = tup[0], tup[1:]
            out = "".join(
                "".join(str(int(c) + offsets[int(letter) - 1]) for c in vs[int(letter) - 1]) for letter in w
            )
            table[tup] = out
        gamma[(k, parts)] = table
    return OperadData(seq, "1", gamma)


def structure_map(O: OperadData, x):
    """The induced map ``(O o O)(n) -> O(n)``: shuffle the consecutive composite onto the blocks."""
    if x is BASEPOINT:
        return x
    out = O.compose(x.outer, x.inner, x.partition.sizes)
    if out is BASEPOINT:
        return out
    return O.seq.level(x.partition.ground).act(x.partition.shuffle(), out)
