"""Connectivity arithmetic for stable first-order excision and the colimit comparison criterion.

Connectivities are extended integers: Python ints, or :data:`INFINITY`.
Nothing here computes a homotopy type; every verdict is about the stated
numerical hypothesis only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

__all__ = [
    "INFINITY",
    "HypothesisNotApplicable",
    "ExcisionHypothesis",
    "ConnectivityProfile",
    "MultiProfile",
    "Verdict",
    "CatalogEntry",
    "apply_T1",
    "iterate_T1",
    "t1_connectivity",
    "iterate_profile",
    "bokstedt_verdict",
    "example_hypotheses",
    "connectivity_json",
]

INFINITY = math.inf


class HypothesisNotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class ExcisionHypothesis:
    c: int
    kappa: int

    def __post_init__(self):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (self.c, self.kappa)):
            raise TypeError("excision constants must be integers")

    def __str__(self) -> str:
        return f"E1({self.c}, {self.kappa})"


def apply_T1(h: ExcisionHypothesis) -> ExcisionHypothesis:
    return ExcisionHypothesis(h.c - 1, h.kappa - 1)


def iterate_T1(h: ExcisionHypothesis, i: int) -> ExcisionHypothesis:
    for _ in range(i):
        h = apply_T1(h)
    return h


def t1_connectivity(h: ExcisionHypothesis, ell: int) -> int | None:
    """Connectivity of ``F -> T1 F`` on ``(ell-1)``-connected inputs, or ``None`` when ``ell < kappa``."""
    if ell < h.kappa:
        return None
    return -h.c + 2 * ell


def connectivity_json(v) -> int | str:
    return "inf" if v == INFINITY else v


@dataclass(frozen=True)
class ConnectivityProfile:
    stages: tuple
    ell: int | None = None

    def __post_init__(self):
        stages = tuple(self.stages)
        for v in stages:
            if v != INFINITY and not (isinstance(v, int) and not isinstance(v, bool)):
                raise TypeError(f"connectivity {v!r} is not an extended integer")
        object.__setattr__(self, "stages", stages)

    def values(self) -> tuple:
        return self.stages

    def to_json(self) -> dict:
        return {"ell": self.ell, "stages": [connectivity_json(v) for v in self.stages]}


@dataclass(frozen=True)
class MultiProfile:
    """Connectivity ``n_|x|`` of the maps of a ``q``-variable diagram, a function of the norm ``|x|``."""

    q: int
    bound: Callable[[int], int | float] = field(compare=False)
    max_norm: int = 10

    def values(self) -> tuple:
        return ConnectivityProfile(tuple(self.bound(k) for k in range(self.max_norm + 1))).stages


def iterate_profile(h: ExcisionHypothesis, ell: int, N: int) -> ConnectivityProfile:
    if N < 1:
        raise ValueError("N must be positive")
    if ell < h.kappa:
        raise HypothesisNotApplicable(f"ell={ell} is below kappa={h.kappa} for {h}")
    # stage i is the map T1^i F -> T1^{i+1} F, i.e. t1 for the i-fold iterate
    return ConnectivityProfile(tuple(t1_connectivity(iterate_T1(h, i), ell) for i in range(N + 1)), ell)


@dataclass(frozen=True)
class Verdict:
    satisfied: bool
    slope: int | float | None
    window: tuple[int, int]

    @property
    def label(self) -> str:
        return "criterion satisfied" if self.satisfied else "not established"

    def to_json(self) -> dict:
        return {
            "verdict": self.label,
            "slope": connectivity_json(self.slope) if self.slope is not None else None,
            "window": list(self.window),
        }


def _increases(a, b) -> bool:
    return b == INFINITY or b > a


def bokstedt_verdict(p: ConnectivityProfile | MultiProfile | Sequence) -> Verdict:
    """Decide whether the data certifies ``n -> infinity``.

    The verdict is positive when a tail covering at least half of the range
    (and at least two steps) is strictly increasing, with ``+inf`` absorbing.
    Integer steps then give a certified slope of at least 1; the reported
    slope is the smallest finite step, or ``inf`` if the tail is all infinite.
    Otherwise the window reported is the last failing step, or the whole
    range when it is too short to decide.
    """
    values = tuple(p) if isinstance(p, (list, tuple)) else p.values()
    last = len(values) - 1
    need = max(2, math.ceil(last / 2))
    if last < 2:
        return Verdict(False, None, (0, max(last, 0)))
    start = last
    while start > 0 and _increases(values[start - 1], values[start]):
        start -= 1
    if last - start < need:
        bad = start - 1 if start > 0 else 0
        return Verdict(False, None, (bad, bad + 1))
    steps = [b - a for a, b in zip(values[start:], values[start + 1:]) if b != INFINITY]
    return Verdict(True, min(steps) if steps else INFINITY, (start, last))


@dataclass(frozen=True)
class CatalogEntry:
    functor: str
    c: str
    kappa: str
    tag: str
    parameters: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"functor": self.functor, "c": self.c, "kappa": self.kappa, "tag": self.tag, "parameters": self.parameters}


def example_hypotheses(dims: Sequence[int] = (0, 1, 2)) -> list[CatalogEntry]:
    """Catalog of stably 1-excisive functors; bounds are kept symbolic, ``n`` is not interpreted."""
    out = [CatalogEntry("identity", "c", "kappa", "Blakers-Massey", {"constants": "symbolic"})]
    for k in dims:
        out.append(CatalogEntry(f"Hom(K,-), dim K = {k}", f"{k}·n", "-1", "stated bound", {"dim K": k}))
    return out
