# equires/operations/delta.py

"""
Module: delta.py

The differential operator Δ on ideals of A[x]: Δ(I) is I together with every first partial
derivative of its generators (A-linear derivations ∂/∂x_i). Iterates Δ^k are cached per
ideal, and the singular locus of a pair (I, b) is V(Δ^{b-1}(I)).

Functions:
- delta(I) -> Ideal
- delta_power(I, k) -> Ideal: Δ^k(I), Δ^0(I) = I.
- delta_cache(I) -> DeltaCache: the shared ladder of I (one per distinct ideal).
- singular_ideal(I, b) -> Ideal: Δ^{b-1}(I).
- variety(I) -> VarietyDescription
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict

from equires.exceptions import BadInput
from equires.operations.ideal import Ideal


def delta(ideal: Ideal) -> Ideal:
    partials = tuple(g.diff(v) for g in ideal.gens for v in ideal.vars)
    return Ideal(ideal.vars, ideal.m, ideal.gens + partials).canonical()


def delta_power(ideal: Ideal, k: int) -> Ideal:
    return delta_cache(ideal).get(k)


@lru_cache(maxsize=2048)
def delta_cache(ideal: Ideal) -> "DeltaCache":
    return DeltaCache(ideal)


@dataclass
class DeltaCache:
    """Lazy ladder Δ^0(I) ⊆ Δ^1(I) ⊆ ... stopping at the unit ideal."""

    ideal: Ideal
    _ladder: Dict[int, Ideal] = field(default_factory=dict)

    def get(self, k: int) -> Ideal:
        if k < 0:
            raise BadInput(f"Negative Δ-power {k}")
        if not self._ladder:
            self._ladder[0] = self.ideal
        top = max(self._ladder)
        while top < k:
            current = self._ladder[top]
            if current.is_unit():
                return current
            self._ladder[top + 1] = delta(current)
            top += 1
        return self._ladder[k]


@dataclass(frozen=True)
class VarietyDescription:
    """Closed subscheme V(ideal) of a chart; empty when the ideal is the unit ideal."""

    ideal: Ideal
    empty: bool

    def __str__(self) -> str:
        return "∅" if self.empty else f"V{self.ideal}"


def variety(ideal: Ideal) -> VarietyDescription:
    return VarietyDescription(ideal, ideal.is_unit())


def singular_ideal(ideal: Ideal, b: int) -> Ideal:
    if b < 1:
        raise BadInput(f"b must be at least 1, got {b}")
    return delta_power(ideal, b - 1)
