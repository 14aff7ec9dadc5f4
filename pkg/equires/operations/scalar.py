# equires/operations/scalar.py

"""
Module: scalar.py

Elements of the Artin ring A = Q[ε]/(ε^m), stored as exact rational coefficient
vectors (c_0, ..., c_{m-1}).

Functions:
- add(a, b) / subtract(a, b) / multiply(a, b): ring operations, truncated at ε^m.
- inverse(a): multiplicative inverse of a unit. Raises NonUnit when c_0 == 0.
- fiber(a): the residue c_0 in Q.
- valuation(a): smallest k with c_k != 0 (m for zero).
- truncate(a, m_new): image under Q[ε]/(ε^m) -> Q[ε]/(ε^m_new).

Usage:
>>> a = ArtinScalar.of([1, 2], m=3)
>>> multiply(a, inverse(a)) == ArtinScalar.one(3)
True
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

from equires.exceptions import BadInput, NonUnit

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class ArtinScalar:
    coeffs: Tuple[Fraction, ...]
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise BadInput(f"Truncation order must be at least 1, got {self.m}")
        cs = tuple(Fraction(c) for c in self.coeffs)[: self.m]
        cs = cs + (Fraction(0),) * (self.m - len(cs))
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def of(cls, coeffs: Iterable[Rational], m: int) -> "ArtinScalar":
        return cls(tuple(Fraction(c) for c in coeffs), m)

    @classmethod
    def constant(cls, value: Rational, m: int) -> "ArtinScalar":
        return cls((Fraction(value),), m)

    @classmethod
    def zero(cls, m: int) -> "ArtinScalar":
        return cls((), m)

    @classmethod
    def one(cls, m: int) -> "ArtinScalar":
        return cls((Fraction(1),), m)

    @classmethod
    def eps_power(cls, k: int, m: int) -> "ArtinScalar":
        return cls((Fraction(0),) * k + (Fraction(1),), m)

    def _coerce(self, other) -> "ArtinScalar":
        if isinstance(other, ArtinScalar):
            if other.m != self.m:
                raise BadInput(f"Mixed truncation orders {self.m} and {other.m}")
            return other
        if isinstance(other, (int, Fraction)):
            return ArtinScalar.constant(other, self.m)
        raise TypeError(f"Unsupported operand type for ArtinScalar: {type(other).__name__}")

    def __add__(self, other) -> "ArtinScalar":
        other = self._coerce(other)
        return ArtinScalar(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.m)

    __radd__ = __add__

    def __neg__(self) -> "ArtinScalar":
        return ArtinScalar(tuple(-a for a in self.coeffs), self.m)

    def __sub__(self, other) -> "ArtinScalar":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ArtinScalar":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ArtinScalar":
        other = self._coerce(other)
        out = [Fraction(0)] * self.m
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(self.m - i):
                out[i + j] += a * other.coeffs[j]
        return ArtinScalar(tuple(out), self.m)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ArtinScalar":
        result = ArtinScalar.one(self.m)
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_unit(self) -> bool:
        return self.coeffs[0] != 0

    def is_constant(self) -> bool:
        """True when the element lies in Q (no ε terms)."""
        return all(c == 0 for c in self.coeffs[1:])

    def fiber(self) -> Fraction:
        return self.coeffs[0]

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return self.m

    def inverse(self) -> "ArtinScalar":
        if not self.is_unit():
            raise NonUnit(f"{self} is not a unit of Q[eps]/(eps^{self.m})")
        # a = c0 (1 + n) with n nilpotent; 1/(1+n) = sum (-n)^k
        c0 = self.coeffs[0]
        n = ArtinScalar(tuple(c / c0 for c in self.coeffs), self.m) - 1
        term = ArtinScalar.one(self.m)
        total = ArtinScalar.one(self.m)
        for _ in range(1, self.m):
            term = term * (-n)
            total = total + term
        return total * ArtinScalar.constant(1 / c0, self.m)

    def truncate(self, m_new: int) -> "ArtinScalar":
        if m_new > self.m:
            raise BadInput(f"Cannot truncate from m={self.m} up to m={m_new}")
        return ArtinScalar(self.coeffs[:m_new], m_new)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("eps" if k == 1 else f"eps^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


def add(a: ArtinScalar, b: ArtinScalar) -> ArtinScalar:
    return a + b


def subtract(a: ArtinScalar, b: ArtinScalar) -> ArtinScalar:
    return a - b


def multiply(a: ArtinScalar, b: ArtinScalar) -> ArtinScalar:
    return a * b


def inverse(a: ArtinScalar) -> ArtinScalar:
    """
    Multiplicative inverse in A.

    Raises:
    - NonUnit: if the constant term of a is zero.
    """
    return a.inverse()


def fiber(a: ArtinScalar) -> Fraction:
    return a.fiber()


def valuation(a: ArtinScalar) -> int:
    return a.valuation()


def truncate(a: ArtinScalar, m_new: int) -> ArtinScalar:
    return a.truncate(m_new)
