"""The sphere operad in exact rational arithmetic.

``S_n`` is the one-point compactification of the open ``(n-1)``-simplex
``{t in Q^n : t_i > 0, sum t_i = 1}``; composition multiplies blockwise and is
a homeomorphism onto the composite simplex.  Spheres ``S^m`` are modelled as
the compactified open cube ``((0,1)^m)^+`` with the symmetric group permuting
coordinates.  Every map here sends rationals to rationals, so every identity is
checked with ``==`` on :class:`fractions.Fraction`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .combinat import (
    OrderedComposition,
    Permutation,
    block_permutation,
    direct_sum,
    enumerate_compositions,
    enumerate_permutations,
)

__all__ = [
    "INF",
    "SimplexPoint",
    "SmashSpherePoint",
    "point",
    "gamma",
    "gamma_inv",
    "permute",
    "smash_gamma",
    "graft",
    "coend_adjoint",
    "coend_adjoint_inv",
    "ray_adjoint",
    "ray_adjoint_inv",
    "structure_map",
    "structure_map_inv",
    "MapDescriptor",
    "Identity",
    "CoordinatePermutation",
    "Reflection",
    "BasepointConstant",
    "Compose",
    "Stabilize",
    "Slice",
    "stabilize",
    "reproduce_tower_example",
    "simplex_grid",
    "random_simplex_point",
    "random_cube_point",
    "check_gamma_laws",
    "check_coend",
    "check_stabilization",
    "fraction_str",
    "parse_fraction",
]


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


@dataclass(frozen=True)
class SimplexPoint:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if not coords:
            raise ValueError("a simplex point needs at least one coordinate")
        if any(c <= 0 for c in coords):
            raise ValueError(f"coordinates must be positive: {coords}")
        if sum(coords) != 1:
            raise ValueError(f"coordinates must sum to 1, got {sum(coords)}")

    @property
    def arity(self) -> int:
        return len(self.coords)

    def to_json(self) -> list[str]:
        return [fraction_str(c) for c in self.coords]


SpherePoint = Union[SimplexPoint, _Infinity]


def point(*coords) -> SimplexPoint:
    return SimplexPoint(tuple(Fraction(c) for c in coords))


def fraction_str(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def _blocks(sizes: Sequence[int]) -> list[tuple[int, int]]:
    bounds = list(itertools.accumulate([0, *sizes]))
    return list(zip(bounds, bounds[1:]))


def gamma(s: SpherePoint, ts: Sequence[SpherePoint]) -> SpherePoint:
    """``S_k ^ S_j1 ^ ... ^ S_jk -> S_(j1+...+jk)``: scale each inner point by its outer weight."""
    if s is INF or any(t is INF for t in ts):
        return INF
    if len(ts) != s.arity:
        raise ValueError(f"{len(ts)} inputs for an operation of arity {s.arity}")
    return SimplexPoint(tuple(w * c for w, t in zip(s.coords, ts) for c in t.coords))


def gamma_inv(u: SpherePoint, blocks: OrderedComposition | Sequence[int]) -> tuple[SpherePoint, list[SpherePoint]]:
    """Inverse of :func:`gamma` for the given consecutive block sizes."""
    sizes = tuple(blocks.parts if isinstance(blocks, OrderedComposition) else blocks)
    if u is INF:
        return INF, [INF] * len(sizes)
    if sum(sizes) != u.arity or any(j < 1 for j in sizes):
        raise ValueError(f"blocks {sizes} do not compose to arity {u.arity}")
    weights, inner = [], []
    for lo, hi in _blocks(sizes):
        part = u.coords[lo:hi]
        w = sum(part)
        weights.append(w)
        inner.append(SimplexPoint(tuple(c / w for c in part)))
    return SimplexPoint(tuple(weights)), inner


def permute(sigma: Permutation, p: SpherePoint) -> SpherePoint:
    if p is INF:
        return p
    if sigma.size != p.arity:
        raise ValueError(f"permutation of size {sigma.size} on a point of arity {p.arity}")
    return SimplexPoint(sigma.apply(p.coords))


@dataclass(frozen=True)
class SmashSpherePoint:
    """A non-basepoint point of ``S_(n_1) ^ ... ^ S_(n_m)``, one factor per element of ``[m]``.

    Use :meth:`of` to build one; it collapses to :data:`INF` when a factor is the basepoint.
    """

    factors: tuple[SimplexPoint, ...]

    @classmethod
    def of(cls, factors: Sequence[SpherePoint]) -> "SmashSpherePoint | _Infinity":
        if any(f is INF for f in factors):
            return INF
        return cls(tuple(factors))

    @property
    def arities(self) -> tuple[int, ...]:
        return tuple(f.arity for f in self.factors)

    @property
    def arity(self) -> int:
        arities = set(self.arities)
        if len(arities) != 1:
            raise ValueError(f"factors have mixed arities {self.arities}")
        return arities.pop()

    def act(self, sigma: Permutation) -> "SmashSpherePoint":
        """The diagonal action."""
        return SmashSpherePoint(tuple(permute(sigma, f) for f in self.factors))


def smash_gamma(s, ts: Sequence) -> "SmashSpherePoint | _Infinity":
    """Composition in the smash power: regroup by index, then compose factorwise."""
    if s is INF or any(t is INF for t in ts):
        return INF
    m = len(s.factors)
    if any(len(t.factors) != m for t in ts):
        raise ValueError("smash points are indexed by different sets")
    return SmashSpherePoint(tuple(gamma(s.factors[u], [t.factors[u] for t in ts]) for u in range(m)))


def graft(outer, inner) -> "SmashSpherePoint | _Infinity":
    """Compose a first-stage point over ``[m]`` with a second-stage point over its output coordinates.

    ``inner`` has one factor per output coordinate, listed block by block;
    factor ``u`` of the result is ``gamma(outer_u; inner factors of block u)``.
    """
    if outer is INF or inner is INF:
        return INF
    sizes = outer.arities
    if sum(sizes) != len(inner.factors):
        raise ValueError("second-stage point has the wrong number of factors")
    return SmashSpherePoint(
        tuple(gamma(f, inner.factors[lo:hi]) for f, (lo, hi) in zip(outer.factors, _blocks(sizes)))
    )


def _check_cube(z: Sequence[Fraction]) -> tuple[Fraction, ...]:
    z = tuple(Fraction(c) for c in z)
    if any(not 0 < c < 1 for c in z):
        raise ValueError(f"cube coordinates must lie in (0, 1): {z}")
    return z


def _gauge_corner(v: Sequence[Fraction], n: int) -> Fraction:
    # Minkowski gauge of {y_i > 0, sum y < 1} centred at its barycentre
    return (n + 1) * max(max(-c for c in v), sum(v))


def _gauge_cube(v: Sequence[Fraction]) -> Fraction:
    return 2 * max(abs(c) for c in v)


def coend_adjoint(s: SpherePoint, x) -> tuple[Fraction, ...] | _Infinity:
    """``S_n ^ S^1 -> S^n``: scale ``s`` by ``x`` into the corner simplex, then map it radially onto the cube.

    The radial map takes the corner simplex's barycentre to the cube's centre
    and matches the piecewise-linear gauges, so it is a rational,
    coordinate-symmetric homeomorphism.
    """
    if s is INF or x is INF:
        return INF
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"circle coordinate must lie in (0, 1): {x}")
    n = s.arity
    centre = Fraction(1, n + 1)
    v = [x * c - centre for c in s.coords]
    if all(c == 0 for c in v):
        return (Fraction(1, 2),) * n
    scale = _gauge_corner(v, n) / _gauge_cube(v)
    return tuple(Fraction(1, 2) + scale * c for c in v)


def coend_adjoint_inv(z) -> tuple[SpherePoint, Fraction | _Infinity]:
    if z is INF:
        return INF, INF
    z = _check_cube(z)
    n = len(z)
    w = [c - Fraction(1, 2) for c in z]
    centre = Fraction(1, n + 1)
    if all(c == 0 for c in w):
        y = [centre] * n
    else:
        scale = _gauge_cube(w) / _gauge_corner(w, n)
        y = [centre + scale * c for c in w]
    x = sum(y)
    return SimplexPoint(tuple(c / x for c in y)), x


def ray_adjoint(s: SpherePoint, x) -> tuple[Fraction, ...] | _Infinity:
    """``S_n ^ S^1 -> S^n`` through the ray model ``(0, inf)`` of the circle.

    With ``r = x / (1 - x)`` the point ``r * s`` of ``(0, inf)^n`` is sent back
    to the cube coordinatewise.  Unlike :func:`coend_adjoint` this satisfies
    ``ray(gamma(a; b), x) = (ray(b_i, ray(a, x)_i))_i`` exactly.
    """
    if s is INF or x is INF:
        return INF
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"circle coordinate must lie in (0, 1): {x}")
    r = x / (1 - x)
    return tuple((r * c) / (1 + r * c) for c in s.coords)


def ray_adjoint_inv(z) -> tuple[SpherePoint, Fraction | _Infinity]:
    if z is INF:
        return INF, INF
    z = _check_cube(z)
    y = [c / (1 - c) for c in z]
    r = sum(y)
    return SimplexPoint(tuple(c / r for c in y)), r / (1 + r)


def structure_map(s, x) -> tuple[Fraction, ...] | _Infinity:
    """``(S_(j_1) ^ ... ^ S_(j_m)) ^ S^m -> S^(j_1 + ... + j_m)``, block ``u`` from coordinate ``u``."""
    if s is INF or x is INF:
        return INF
    if len(s.factors) != len(x):
        raise ValueError("sphere point and cube point are indexed by different sets")
    out: list[Fraction] = []
    for f, c in zip(s.factors, x):
        out.extend(ray_adjoint(f, c))
    return tuple(out)


def structure_map_inv(z, mult: Sequence[int]):
    if z is INF:
        return INF, INF
    if sum(mult) != len(z):
        raise ValueError(f"multiplicities {tuple(mult)} do not match dimension {len(z)}")
    factors, xs = [], []
    for lo, hi in _blocks(mult):
        f, c = ray_adjoint_inv(z[lo:hi])
        factors.append(f)
        xs.append(c)
    return SmashSpherePoint(tuple(factors)), tuple(xs)


class MapDescriptor:
    """A pointed map between cube-model spheres, evaluated lazily on exact points."""

    dom: int
    cod: int

    def __call__(self, z):
        if z is INF:
            return INF
        if len(z) != self.dom:
            raise ValueError(f"point of dimension {len(z)} for a map from S^{self.dom}")
        return self._eval(tuple(Fraction(c) for c in z))

    def _eval(self, z):
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(MapDescriptor):
    dim: int

    @property
    def dom(self):
        return self.dim

    @property
    def cod(self):
        return self.dim

    def _eval(self, z):
        return z


@dataclass(frozen=True)
class CoordinatePermutation(MapDescriptor):
    sigma: Permutation

    @property
    def dom(self):
        return self.sigma.size

    @property
    def cod(self):
        return self.sigma.size

    def _eval(self, z):
        return self.sigma.apply(z)


@dataclass(frozen=True)
class Reflection(MapDescriptor):
    """``z_i -> 1 - z_i`` on the coordinates listed in ``mask`` (1-based)."""

    dim: int
    mask: tuple[int, ...]

    @property
    def dom(self):
        return self.dim

    @property
    def cod(self):
        return self.dim

    def _eval(self, z):
        return tuple(1 - c if i in self.mask else c for i, c in enumerate(z, start=1))


@dataclass(frozen=True)
class BasepointConstant(MapDescriptor):
    dom: int
    cod: int

    def _eval(self, z):
        return INF


@dataclass(frozen=True)
class Compose(MapDescriptor):
    """``outer o inner``."""

    outer: MapDescriptor
    inner: MapDescriptor

    def __post_init__(self):
        if self.outer.dom != self.inner.cod:
            raise ValueError(f"cannot compose S^{self.inner.cod} -> with a map from S^{self.outer.dom}")

    @property
    def dom(self):
        return self.inner.dom

    @property
    def cod(self):
        return self.outer.cod

    def _eval(self, z):
        return self.outer(self.inner(z))


@dataclass(frozen=True)
class Stabilize(MapDescriptor):
    """``id ^ f`` on ``S^mult ^ S^m``, transported to ``S^(sum mult)`` by :func:`structure_map`.

    With ``functor="identity"`` the map ``f`` is a point of the mapping space
    of the identity functor and only moves the cube coordinates.  With
    ``functor="permutation"`` the map ``f`` must be a coordinate permutation
    and is read as the permutation functor, whose assembly map also permutes
    the sphere-operad factors; this needs ``mult`` to be constant on orbits.
    """

    f: MapDescriptor
    mult: tuple[int, ...]
    functor: str = "identity"

    def __post_init__(self):
        if self.f.dom != self.f.cod or self.f.dom != len(self.mult):
            raise ValueError("stabilization needs an endomorphism of S^m and m multiplicities")
        if any(j < 1 for j in self.mult):
            raise ValueError("multiplicities must be positive")
        if self.functor == "permutation":
            if not isinstance(self.f, CoordinatePermutation):
                raise ValueError("the permutation functor needs a CoordinatePermutation")
            if any(self.mult[self.f.sigma(u) - 1] != self.mult[u - 1] for u in range(1, len(self.mult) + 1)):
                raise ValueError("multiplicities must be invariant under the permutation")
        elif self.functor != "identity":
            raise ValueError(f"unknown functor {self.functor!r}")

    @property
    def dom(self):
        return sum(self.mult)

    @property
    def cod(self):
        return sum(self.mult)

    def _eval(self, z):
        s, x = structure_map_inv(z, self.mult)
        if self.functor == "permutation":
            s = SmashSpherePoint(self.f.sigma.apply(s.factors))
        return structure_map(s, self.f(x))


@dataclass(frozen=True)
class Slice(MapDescriptor):
    """``x -> structure_map(s, f(x))``: smash ``f`` with a fixed sphere-operad point ``s``."""

    f: MapDescriptor
    s: SmashSpherePoint

    def __post_init__(self):
        if len(self.s.factors) != self.f.cod:
            raise ValueError("the fixed point must have one factor per output coordinate of f")

    @property
    def dom(self):
        return self.f.dom

    @property
    def cod(self):
        return sum(self.s.arities)

    def _eval(self, z):
        return structure_map(self.s, self.f(z))


def stabilize(
    f: MapDescriptor, j: int | Sequence[int], s: SmashSpherePoint | None = None, functor: str = "identity"
) -> MapDescriptor:
    """Stabilize ``f`` along ``j`` copies of each coordinate.

    ``j`` is a common multiplicity or one multiplicity per coordinate.  Without
    ``s`` the result is the endomorphism ``id ^ f`` of ``S^(sum j)``; with ``s``
    it is its restriction ``x -> s ^ f(x)`` to the slice through ``s``.
    """
    mult = (j,) * f.cod if isinstance(j, int) else tuple(j)
    if s is None:
        return Stabilize(f, mult, functor)
    if functor != "identity":
        raise ValueError("slices are only defined for the identity functor")
    if s is INF:
        raise ValueError("stabilization at the basepoint is constant; pass a non-basepoint point")
    if s.arities != mult:
        raise ValueError(f"point arities {s.arities} do not match multiplicities {mult}")
    return Slice(f, s)


def _grid_1d(R: int) -> list[Fraction]:
    return [Fraction(i, R) for i in range(1, R)]


def reproduce_tower_example(grid: int = 12, f: MapDescriptor | None = None) -> dict:
    """Compare ``S^1 -> S^2 -> S^3`` in two steps with the single step through ``gamma``.

    Uses ``a = b = (1/2, 1/2)`` and ``c = (1)``; the one-step point is
    ``gamma(a; b, c) = (1/4, 1/4, 1/2)``.  Also checks the full stabilized
    endomorphisms on a cube grid, the basepoint-constant map, and the variant
    with ``a`` swapped and ``(c, b)`` in place of ``(b, c)``.
    """
    f = Identity(1) if f is None else f
    a = b = point(Fraction(1, 2), Fraction(1, 2))
    c = point(1)
    abc = gamma(a, [b, c])
    two = Slice(Slice(f, SmashSpherePoint((a,))), SmashSpherePoint((b, c)))
    one = Slice(f, SmashSpherePoint((abc,)))
    swap = Permutation((2, 1))
    two_swapped = Slice(Slice(f, SmashSpherePoint((permute(swap, a),))), SmashSpherePoint((c, b)))
    shuffle = block_permutation(swap, (2, 1))
    const = BasepointConstant(1, 1)
    checked, failures, witness = 0, 0, None

    def record(ok, where):
        nonlocal checked, failures, witness
        checked += 1
        if not ok:
            failures += 1
            witness = witness or where

    for x in _grid_1d(grid):
        pt = (x,)
        lhs = two(pt)
        record(lhs == one(pt), {"check": "slice", "x": fraction_str(x)})
        record(two_swapped(pt) == shuffle.apply(lhs), {"check": "swapped", "x": fraction_str(x)})
        bp_two = Slice(Slice(const, SmashSpherePoint((a,))), SmashSpherePoint((b, c)))(pt)
        bp_one = Slice(const, SmashSpherePoint((abc,)))(pt)
        record(bp_two is INF and bp_one is INF, {"check": "basepoint", "x": fraction_str(x)})
    full_two = Stabilize(Stabilize(f, (2,)), (2, 1))
    full_one = Stabilize(f, (3,))
    for z in itertools.product(_grid_1d(max(2, grid // 3)), repeat=3):
        record(full_two(z) == full_one(z), {"check": "endomorphism", "z": [fraction_str(v) for v in z]})
    return {
        "status": "pass" if failures == 0 else "fail",
        "checked": checked,
        "failures": failures,
        "witness": witness,
        "composite_point": abc.to_json(),
    }


def simplex_grid(n: int, max_den: int) -> list[SimplexPoint]:
    """Points of the open simplex whose coordinates share a denominator at most ``max_den``."""
    seen = set()
    for d in range(n, max_den + 1):
        for comp in enumerate_compositions(d, n):
            seen.add(tuple(Fraction(p, d) for p in comp.parts))
    return [SimplexPoint(c) for c in sorted(seen)]


def random_simplex_point(rng: random.Random, n: int, max_weight: int = 30) -> SimplexPoint:
    weights = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(weights)
    return SimplexPoint(tuple(Fraction(w, total) for w in weights))


def random_cube_point(rng: random.Random, n: int, max_den: int = 50) -> tuple[Fraction, ...]:
    out = []
    for _ in range(n):
        d = rng.randint(2, max_den)
        out.append(Fraction(rng.randint(1, d - 1), d))
    return tuple(out)


def _random_composition(rng: random.Random, total: int) -> tuple[int, ...]:
    k = rng.randint(1, total)
    return rng.choice(enumerate_compositions(total, k)).parts


def _gamma_law_failures(s, ts, us, sigmas, tau_tuples) -> list[str]:
    """Laws for ``gamma(s; ts)`` with a third layer ``us``; returns the names of failing laws."""
    bad = []
    parts = [t.arity for t in ts]
    st = gamma(s, ts)
    if gamma(point(1), [st]) != st or gamma(st, [point(1)] * st.arity) != st:
        bad.append("unit")
    grouped, pos = [], 0
    for t in ts:
        grouped.append(gamma(t, us[pos:pos + t.arity]))
        pos += t.arity
    if gamma(st, us) != gamma(s, grouped):
        bad.append("associativity")
    outer, inner = gamma_inv(st, parts)
    if outer != s or inner != list(ts):
        bad.append("gamma_inv-after-gamma")
    if gamma(*gamma_inv(st, parts)) != st:
        bad.append("gamma-after-gamma_inv")
    for sigma in sigmas:
        if gamma(permute(sigma, s), sigma.apply(tuple(ts))) != permute(block_permutation(sigma, parts), st):
            bad.append("equivariance-block")
            break
    for taus in tau_tuples:
        moved = [permute(tau, t) for tau, t in zip(taus, ts)]
        if gamma(s, moved) != permute(direct_sum(taus), st):
            bad.append("equivariance-inner")
            break
    return bad


def check_gamma_laws(samples: int = 10_000, seed: int = 0, max_den: int = 6, max_total: int = 5) -> dict:
    """Operad laws of ``gamma`` exhaustively on a rational grid and on seeded random points.

    The grid runs over every ``gamma(s; t_1..t_k)`` with ``sum arity(t) <= max_total``
    and all coordinates of denominator at most ``max_den``, checking unit,
    both round trips with ``gamma_inv`` and equivariance under every block
    and inner permutation.  Associativity there uses a seeded random third
    layer.  Random samples draw all three layers and one permutation of each kind.
    """
    rng = random.Random(seed)
    checked, failures, witness = 0, 0, None
    grids = {n: simplex_grid(n, max_den) for n in range(1, max_total + 1)}

    def run(s, ts, us, sigmas, tau_tuples, source):
        nonlocal checked, failures, witness
        checked += 1
        bad = _gamma_law_failures(s, ts, us, sigmas, tau_tuples)
        if bad:
            failures += 1
            if witness is None:
                witness = {
                    "source": source,
                    "laws": bad,
                    "s": s.to_json(),
                    "t": [t.to_json() for t in ts],
                    "u": [u.to_json() for u in us],
                }

    for total in range(1, max_total + 1):
        for ts_parts in (c.parts for k in range(1, total + 1) for c in enumerate_compositions(total, k)):
            sigmas = enumerate_permutations(len(ts_parts))
            tau_tuples = list(itertools.product(*(enumerate_permutations(j) for j in ts_parts)))
            for s in grids[len(ts_parts)]:
                for ts in itertools.product(*(grids[j] for j in ts_parts)):
                    us = [random_simplex_point(rng, rng.randint(1, 3)) for _ in range(total)]
                    run(s, list(ts), us, sigmas, tau_tuples, "grid")
    for _ in range(samples):
        total = rng.randint(1, max_total)
        us_parts = _random_composition(rng, total)
        ts_parts = _random_composition(rng, len(us_parts))
        s = random_simplex_point(rng, len(ts_parts))
        ts = [random_simplex_point(rng, j) for j in ts_parts]
        us = [random_simplex_point(rng, l) for l in us_parts]
        sigma = rng.choice(enumerate_permutations(len(ts_parts)))
        taus = tuple(rng.choice(enumerate_permutations(j)) for j in ts_parts)
        run(s, ts, us, [sigma], [taus], "random")
    return {"status": "pass" if failures == 0 else "fail", "checked": checked, "failures": failures, "witness": witness}


def check_coend(samples: int = 1000, seed: int = 0, max_n: int = 4) -> dict:
    """Round trips, symmetry and the diagonal property of :func:`coend_adjoint` for ``n <= max_n``."""
    rng = random.Random(seed)
    checked, failures, witness = 0, 0, None
    for n in range(1, max_n + 1):
        perms = enumerate_permutations(n)
        bary = SimplexPoint((Fraction(1, n),) * n)
        for _ in range(samples):
            s = random_simplex_point(rng, n)
            x = random_cube_point(rng, 1)[0]
            z = coend_adjoint(s, x)
            zc = random_cube_point(rng, n)
            sigma = rng.choice(perms)
            diag = coend_adjoint(bary, x)
            laws = {
                "inverse-after-map": coend_adjoint_inv(z) == (s, x),
                "map-after-inverse": coend_adjoint(*coend_adjoint_inv(zc)) == zc,
                "in-cube": all(0 < c < 1 for c in z),
                "equivariance": coend_adjoint(permute(sigma, s), x) == sigma.apply(z),
                "diagonal": len(set(diag)) == 1,
            }
            checked += 1
            bad = [k for k, ok in laws.items() if not ok]
            if bad:
                failures += 1
                witness = witness or {"n": n, "laws": bad, "s": s.to_json(), "x": fraction_str(x)}
    return {"status": "pass" if failures == 0 else "fail", "checked": checked, "failures": failures, "witness": witness}


def _random_map(rng: random.Random, m: int) -> MapDescriptor:
    f: MapDescriptor = Identity(m)
    for _ in range(rng.randint(0, 3)):
        if rng.random() < 0.5:
            g: MapDescriptor = CoordinatePermutation(rng.choice(enumerate_permutations(m)))
        else:
            g = Reflection(m, tuple(i for i in range(1, m + 1) if rng.random() < 0.5))
        f = Compose(g, f)
    return f


def check_stabilization(samples: int = 1000, seed: int = 0, max_dim: int = 2, max_mult: int = 3) -> dict:
    """Two stabilizations against one through the composed sphere-operad point, exactly.

    Each sample draws a map ``f`` of ``S^m``, first- and second-stage
    multiplicities and points, and compares both the slices through the points
    and the full stabilized endomorphisms at a random point.
    """
    rng = random.Random(seed)
    checked, failures, witness = 0, 0, None
    for _ in range(samples):
        m = rng.randint(1, max_dim)
        f = _random_map(rng, m)
        mult1 = tuple(rng.randint(1, max_mult) for _ in range(m))
        mult2 = tuple(rng.randint(1, max_mult) for _ in range(sum(mult1)))
        s1 = SmashSpherePoint(tuple(random_simplex_point(rng, j) for j in mult1))
        s2 = SmashSpherePoint(tuple(random_simplex_point(rng, j) for j in mult2))
        x = random_cube_point(rng, m)
        combined = tuple(sum(mult2[lo:hi]) for lo, hi in _blocks(mult1))
        two = stabilize(stabilize(f, mult1, s1), mult2, s2)
        one = stabilize(f, combined, graft(s1, s2))
        z = random_cube_point(rng, sum(mult2))
        full_two = stabilize(stabilize(f, mult1), mult2)
        full_one = stabilize(f, combined)
        laws = {"slice": two(x) == one(x), "endomorphism": full_two(z) == full_one(z)}
        if len(set(mult1)) == 1 and len(set(mult2)) == 1:
            j1 = mult1[0]
            split = [SmashSpherePoint(tuple(s2.factors[u * j1 + r] for u in range(m))) for r in range(j1)]
            laws["smash_gamma"] = smash_gamma(s1, split) == graft(s1, s2)
        checked += 1
        bad = [k for k, ok in laws.items() if not ok]
        if bad:
            failures += 1
            witness = witness or {"laws": bad, "mult1": list(mult1), "mult2": list(mult2)}
    return {"status": "pass" if failures == 0 else "fail", "checked": checked, "failures": failures, "witness": witness}
