"""Finite sets and injections, symmetric groups, partitions and compositions.

Objects of the skeletal injection category are the sets ``[n] = {1, ..., n}``
and are represented by their size.  All indices are 1-based, matching the
mathematical notation.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CompositionError",
    "Injection",
    "Permutation",
    "UnorderedPartition",
    "OrderedComposition",
    "identity",
    "compose_injections",
    "enumerate_injections",
    "coproduct",
    "block_swap",
    "is_standard_inclusion",
    "enumerate_permutations",
    "adjacent_transposition",
    "block_permutation",
    "direct_sum",
    "enumerate_partitions",
    "enumerate_compositions",
    "induced_block_data",
    "extend_generator_action",
]


class CompositionError(ValueError):
    """Raised when two morphisms are not composable."""


@dataclass(frozen=True)
class Injection:
    """An injective map ``[dom] -> [cod]`` stored by its image list."""

    dom: int
    cod: int
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(self.image)
        object.__setattr__(self, "image", image)
        if self.dom < 0 or self.cod < 0:
            raise ValueError("object sizes must be non-negative")
        if len(image) != self.dom:
            raise ValueError(f"image has length {len(image)}, expected {self.dom}")
        if any(not 1 <= v <= self.cod for v in image):
            raise ValueError(f"image {image} leaves [1, {self.cod}]")
        if len(set(image)) != len(image):
            raise ValueError(f"image {image} is not injective")

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def to_json(self) -> dict:
        return {"dom": self.dom, "cod": self.cod, "image": list(self.image)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Injection":
        return cls(int(data["dom"]), int(data["cod"]), tuple(int(v) for v in data["image"]))


def identity(n: int) -> Injection:
    return Injection(n, n, tuple(range(1, n + 1)))


def compose_injections(f: Injection, g: Injection) -> Injection:
    """Return ``g o f`` (first ``f``, then ``g``)."""
    if f.cod != g.dom:
        raise CompositionError(f"cannot compose [{f.dom}]->[{f.cod}] with [{g.dom}]->[{g.cod}]")
    return Injection(f.dom, g.cod, tuple(g.image[v - 1] for v in f.image))


def enumerate_injections(m: int, n: int) -> list[Injection]:
    """All injections ``[m] -> [n]`` in lexicographic order of their image lists."""
    if m > n:
        return []
    return [Injection(m, n, image) for image in itertools.permutations(range(1, n + 1), m)]


def coproduct(f: Injection, g: Injection) -> Injection:
    """Disjoint union ``f + g``: ``f`` on the first block, ``g`` shifted on the second."""
    shifted = tuple(v + f.cod for v in g.image)
    return Injection(f.dom + g.dom, f.cod + g.cod, f.image + shifted)


def block_swap(m: int, n: int) -> Injection:
    """The symmetry ``[m] + [n] -> [n] + [m]`` moving the first ``m`` points to the end."""
    image = tuple(i + n for i in range(1, m + 1)) + tuple(i - m for i in range(m + 1, m + n + 1))
    return Injection(m + n, m + n, image)


def is_standard_inclusion(f: Injection) -> bool:
    return all(v == i for i, v in enumerate(f.image, start=1))


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``[size]``; ``mapping[i - 1]`` is the image of ``i``.

    ``rho * sigma`` is the composite "first sigma, then rho".  Permutations act
    on the left of tuples by moving the entry in position ``i`` to position
    ``sigma(i)``.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(1, len(mapping) + 1)):
            raise ValueError(f"{mapping} is not a permutation")

    @property
    def size(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.size != other.size:
            raise ValueError("permutations of different sizes")
        return Permutation(tuple(self.mapping[v - 1] for v in other.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, v in enumerate(self.mapping, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.mapping, start=1))

    def apply(self, seq: Sequence) -> tuple:
        """Move ``seq[i]`` to position ``sigma(i)``."""
        if len(seq) != self.size:
            raise ValueError(f"sequence of length {len(seq)} for a permutation of size {self.size}")
        out = [None] * self.size
        for i, v in enumerate(self.mapping):
            out[v - 1] = seq[i]
        return tuple(out)

    def as_injection(self) -> Injection:
        return Injection(self.size, self.size, self.mapping)

    def __str__(self) -> str:
        return "".join(map(str, self.mapping)) if self.size < 10 else ",".join(map(str, self.mapping))

    def __repr__(self) -> str:
        return f"Permutation({self.mapping})"


def enumerate_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def adjacent_transposition(n: int, i: int) -> Permutation:
    """The transposition of ``i`` and ``i + 1`` in the symmetric group on ``[n]``."""
    if not 1 <= i < n:
        raise ValueError(f"no adjacent transposition s_{i} in S_{n}")
    m = list(range(1, n + 1))
    m[i - 1], m[i] = m[i], m[i - 1]
    return Permutation(tuple(m))


def _offsets(sizes: Sequence[int]) -> list[int]:
    return list(itertools.accumulate([0, *sizes[:-1]]))


def block_permutation(sigma: Permutation, sizes: Sequence[int]) -> Permutation:
    """Permute consecutive blocks of the given sizes as ``sigma`` permutes ``[k]``.

    Block ``i`` of the layout ``sizes`` is moved, order-preservingly, to slot
    ``sigma(i)`` of the layout whose slot ``s`` has size ``sizes[sigma^-1(s) - 1]``.
    """
    k = len(sizes)
    if sigma.size != k:
        raise ValueError("block count does not match permutation size")
    new_sizes = sigma.apply(tuple(sizes))
    old_off = _offsets(list(sizes))
    new_off = _offsets(list(new_sizes))
    mapping = [0] * sum(sizes)
    for i in range(k):
        target = new_off[sigma.mapping[i] - 1]
        for r in range(sizes[i]):
            mapping[old_off[i] + r] = target + r + 1
    return Permutation(tuple(mapping))


def direct_sum(perms: Sequence[Permutation]) -> Permutation:
    mapping: list[int] = []
    offset = 0
    for p in perms:
        mapping.extend(v + offset for v in p.mapping)
        offset += p.size
    return Permutation(tuple(mapping))


@dataclass(frozen=True)
class UnorderedPartition:
    """A set partition of ``[ground]``; blocks sorted, ordered by least element."""

    ground: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if self.ground < 1:
            raise ValueError("partitions are of non-empty sets")
        if any(not b for b in blocks):
            raise ValueError("blocks must be non-empty")
        if any(list(b) != sorted(b) for b in blocks):
            raise ValueError("blocks must be stored in increasing order")
        if sorted(v for b in blocks for v in b) != list(range(1, self.ground + 1)):
            raise ValueError(f"{blocks} is not a partition of [{self.ground}]")
        if [b[0] for b in blocks] != sorted(b[0] for b in blocks):
            raise ValueError("blocks are not in canonical order")
        object.__setattr__(self, "_hash", hash((self.ground, blocks)))

    def __hash__(self) -> int:
        return self._hash

    @classmethod
    def from_blocks(cls, ground: int, blocks: Iterable[Iterable[int]]) -> "UnorderedPartition":
        """Build from blocks in any order, canonicalising."""
        bs = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        return cls(ground, tuple(bs))

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def shuffle(self) -> Permutation:
        """The permutation sending the consecutive layout of ``sizes`` onto the blocks."""
        return Permutation(tuple(v for b in self.blocks for v in b))

    def to_json(self) -> dict:
        return {"n": self.ground, "blocks": [list(b) for b in self.blocks]}

    @classmethod
    def from_json(cls, data: Mapping) -> "UnorderedPartition":
        return cls(int(data["n"]), tuple(tuple(int(v) for v in b) for b in data["blocks"]))

    def __str__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


@dataclass(frozen=True)
class OrderedComposition:
    total: int
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(p < 1 for p in parts) or sum(parts) != self.total:
            raise ValueError(f"{parts} is not a composition of {self.total}")


def _restricted_growth(n: int) -> Iterator[list[int]]:
    # labels[i] is the block index of element i + 1; blocks open in order of least element
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield labels
            return
        for b in range(used + 1):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(1, 1) if n else iter(())


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[UnorderedPartition, ...]:
    out = []
    for labels in _restricted_growth(n):
        k = max(labels) + 1
        blocks: list[list[int]] = [[] for _ in range(k)]
        for i, b in enumerate(labels, start=1):
            blocks[b].append(i)
        out.append(UnorderedPartition(n, tuple(tuple(b) for b in blocks)))
    return tuple(out)


def enumerate_partitions(n: int, k: int | None = None) -> list[UnorderedPartition]:
    """All set partitions of ``[n]``, optionally restricted to exactly ``k`` blocks."""
    if n < 1:
        raise ValueError("n must be positive")
    parts = _partitions(n)
    if k is None:
        return list(parts)
    return [p for p in parts if p.size == k]


def enumerate_compositions(n: int, k: int) -> list[OrderedComposition]:
    """Ordered ``k``-tuples of positive integers summing to ``n``, lexicographically."""
    if k < 1 or k > n:
        return []
    out = []
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        out.append(OrderedComposition(n, tuple(b - a for a, b in zip(bounds, bounds[1:]))))
    return out


@lru_cache(maxsize=None)
def induced_block_data(
    sigma: Permutation, partition: UnorderedPartition
) -> tuple[UnorderedPartition, Permutation, tuple[Permutation, ...]]:
    """How ``sigma`` moves a partition.

    Returns ``(sigma P, tau, rhos)`` where ``tau(i)`` is the canonical position of
    the image of block ``i`` and ``rhos[i - 1]`` is ``sigma`` restricted to block
    ``i``, read through the order-preserving identifications of both blocks with
    ``[n_i]``.
    """
    if sigma.size != partition.ground:
        raise ValueError(f"permutation of size {sigma.size} on a partition of [{partition.ground}]")
    images = [tuple(sorted(sigma(v) for v in b)) for b in partition.blocks]
    moved = UnorderedPartition.from_blocks(partition.ground, images)
    position = {b: i for i, b in enumerate(moved.blocks, start=1)}
    tau = Permutation(tuple(position[b] for b in images))
    rhos = []
    for block, image in zip(partition.blocks, images):
        rank = {v: r for r, v in enumerate(image, start=1)}
        rhos.append(Permutation(tuple(rank[sigma(v)] for v in block)))
    return moved, tau, tuple(rhos)


def extend_generator_action(
    n: int, generators: Mapping[int, Mapping[Hashable, Hashable]], points: Sequence[Hashable]
) -> dict[Permutation, dict[Hashable, Hashable]]:
    """Extend an action of the adjacent transpositions to all of the symmetric group.

    ``generators[i]`` gives the action of ``s_i`` on ``points``; missing
    generators or points act trivially.  Every edge of the Cayley graph is
    checked, so a ``ValueError`` is raised unless the data is a group action.
    """
    pts = tuple(points)
    gens = {}
    for i in range(1, n):
        table = dict(generators.get(i, {}))
        full = {p: table.get(p, p) for p in pts}
        if set(full.values()) != set(pts) or len(set(full.values())) != len(pts):
            raise ValueError(f"generator s_{i} does not act bijectively")
        unknown = set(table) - set(pts)
        if unknown:
            raise ValueError(f"generator s_{i} mentions unknown points {sorted(map(str, unknown))}")
        gens[i] = (adjacent_transposition(n, i), full)
    ident = Permutation.identity(n)
    table: dict[Permutation, dict[Hashable, Hashable]] = {ident: {p: p for p in pts}}
    queue = deque([ident])
    while queue:
        sigma = queue.popleft()
        current = table[sigma]
        for i, (s, g) in gens.items():
            rho = s * sigma
            composed = {p: g[current[p]] for p in pts}
            seen = table.get(rho)
            if seen is None:
                table[rho] = composed
                queue.append(rho)
            elif seen != composed:
                raise ValueError(f"generator data violates a relation of S_{n} at {rho}")
    return table
