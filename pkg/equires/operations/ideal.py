# equires/operations/ideal.py

"""
Module: ideal.py

Finitely generated ideals of A[x] = Q[x, ε]/(ε^m). Membership, equality and unit tests go
through reduced Gröbner bases of I + (ε^m) computed by sympy, with ε the smallest variable
of a graded reverse lexicographic order. Bases are computed lazily and memoized.

Functions:
- groebner_basis(polys, order) -> list[Poly]: reduced basis of the polynomials plus ε^m.
- parse_ideal(texts, vars, m) -> Ideal
- format_ideal(I) -> str: "(f1, f2, ...)" on the current generators.

Usage:
>>> I = parse_ideal(["x^2", "eps*x"], ("x",), 2)
>>> I.contains(parse_poly("eps*x^2 + x^3", ("x",), 2))
True
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from equires.exceptions import BadInput, InfiniteOrder, NotDivisible, UnsupportedCenter
from equires.operations.poly import EPS, Poly, grevlex_key, parse_poly
from equires.operations.scalar import ArtinScalar

logger = logging.getLogger(__name__)

_T = sympy.Symbol("_t_elim")

Point = Union[int, Fraction, ArtinScalar]


def _coordinate(value: Point, m: int) -> ArtinScalar:
    """A point coordinate as an element of Q[ε]/(ε^m): truncated or padded with zeros."""
    if isinstance(value, ArtinScalar):
        if value.m >= m:
            return value.truncate(m)
        return ArtinScalar(value.coeffs, m)
    return ArtinScalar.constant(Fraction(value), m)


@lru_cache(maxsize=4096)
def _groebner(exprs: Tuple[sympy.Expr, ...], gens: Tuple[sympy.Symbol, ...], order: str):
    logger.debug("groebner: %d generators in %s (%s)", len(exprs), gens, order)
    return sympy.groebner(list(exprs), *gens, order=order)


def groebner_basis(polys: Sequence[Poly], order: str = "grevlex") -> List[Poly]:
    """Reduced Gröbner basis of (polys) + (ε^m) in Q[x, ε], returned as polynomials over A."""
    if not polys:
        raise BadInput("groebner_basis needs at least one polynomial")
    vars, m = polys[0].vars, polys[0].m
    gens = tuple(sympy.Symbol(v) for v in vars) + (EPS,)
    exprs = tuple(p.to_sympy() for p in polys) + (EPS ** m,)
    basis = _groebner(exprs, gens, order)
    out = [Poly.from_sympy(g, vars, m) for g in basis.exprs]
    return [p for p in out if not p.is_zero()]


@dataclass(frozen=True)
class Ideal:
    vars: Tuple[str, ...]
    m: int
    gens: Tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        kept = tuple(g for g in self.gens if not g.is_zero())
        for g in kept:
            if g.vars != self.vars or g.m != self.m:
                raise BadInput(f"Generator {g} does not live in {self.vars} over m={self.m}")
        object.__setattr__(self, "gens", kept)

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def of(cls, polys: Iterable[Poly], vars: Optional[Sequence[str]] = None, m: Optional[int] = None) -> "Ideal":
        polys = list(polys)
        if vars is None or m is None:
            if not polys:
                raise BadInput("Ring of an empty generator list is unknown")
            vars, m = polys[0].vars, polys[0].m
        return cls(tuple(vars), m, tuple(polys))

    @classmethod
    def zero(cls, vars: Sequence[str], m: int) -> "Ideal":
        return cls(tuple(vars), m, ())

    @classmethod
    def unit(cls, vars: Sequence[str], m: int) -> "Ideal":
        return cls(tuple(vars), m, (Poly.one(vars, m),))

    @classmethod
    def of_vars(cls, names: Iterable[str], vars: Sequence[str], m: int) -> "Ideal":
        return cls(tuple(vars), m, tuple(Poly.var(n, vars, m) for n in names))

    # ------------------------------------------------------------------
    # Gröbner data
    # ------------------------------------------------------------------
    def _symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(v) for v in self.vars) + (EPS,)

    @cached_property
    def _full_gb(self):
        exprs = tuple(g.to_sympy() for g in self.gens) + (EPS ** self.m,)
        return _groebner(exprs, self._symbols(), "grevlex")

    @cached_property
    def _fiber_gb(self):
        exprs = tuple(g.fiber().to_sympy() for g in self.gens) + (EPS,)
        return _groebner(exprs, self._symbols(), "grevlex")

    def basis(self) -> List[Poly]:
        """Reduced Gröbner basis of I + (ε^m) with ε^m itself removed."""
        out = [Poly.from_sympy(g, self.vars, self.m) for g in self._full_gb.exprs]
        out = [p for p in out if not p.is_zero()]
        return sorted(out, key=lambda p: grevlex_key(p.terms[0][0]))

    def normal_form(self, f: Poly) -> Poly:
        """Remainder of f modulo the reduced basis of I + (ε^m)."""
        _, rem = self._full_gb.reduce(f.to_sympy())
        return Poly.from_sympy(rem, self.vars, self.m)

    def canonical(self) -> "Ideal":
        return Ideal(self.vars, self.m, tuple(self.basis()))

    # ------------------------------------------------------------------
    # predicates
    # ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.gens

    def is_unit(self) -> bool:
        return list(self._fiber_gb.exprs) == [sympy.Integer(1)]

    def contains(self, f: Poly, level: str = "full") -> bool:
        """Membership of f in I (level "full") or of fiber(f) in fiber(I) (level "fiber")."""
        if level == "fiber":
            return bool(self._fiber_gb.contains(f.fiber().to_sympy()))
        if f.is_zero():
            return True
        return bool(self._full_gb.contains(f.to_sympy()))

    def contains_ideal(self, other: "Ideal", level: str = "full") -> bool:
        return all(self.contains(g, level) for g in other.gens)

    def equals(self, other: "Ideal", level: str = "full") -> bool:
        return self.contains_ideal(other, level) and other.contains_ideal(self, level)

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _check(self, other: "Ideal") -> None:
        if other.vars != self.vars or other.m != self.m:
            raise BadInput(f"Incompatible ideals: {self.vars}/m={self.m} vs {other.vars}/m={other.m}")

    def __add__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        return Ideal(self.vars, self.m, self.gens + other.gens).canonical()

    def __mul__(self, other: "Ideal") -> "Ideal":
        self._check(other)
        prods = tuple(f * g for f in self.gens for g in other.gens)
        return Ideal(self.vars, self.m, prods).canonical()

    def power(self, k: int) -> "Ideal":
        if k < 0:
            raise BadInput(f"Negative ideal power {k}")
        result = Ideal.unit(self.vars, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def add_poly(self, *polys: Poly) -> "Ideal":
        return Ideal(self.vars, self.m, self.gens + tuple(polys)).canonical()

    # ------------------------------------------------------------------
    # ring changes and substitutions
    # ------------------------------------------------------------------
    def fiber(self) -> "Ideal":
        return Ideal(self.vars, 1, tuple(g.fiber() for g in self.gens))

    def truncate(self, m_new: int) -> "Ideal":
        return Ideal(self.vars, m_new, tuple(g.truncate(m_new) for g in self.gens))

    def lift(self, m_new: int) -> "Ideal":
        return Ideal(self.vars, m_new, tuple(g.lift(m_new) for g in self.gens))

    def substitute(self, mapping: Mapping[str, Poly], vars_out: Optional[Sequence[str]] = None) -> "Ideal":
        vars_out = tuple(vars_out) if vars_out is not None else self.vars
        return Ideal(vars_out, self.m, tuple(g.substitute(mapping, vars_out) for g in self.gens))

    def restrict(self, name: str) -> "Ideal":
        """Image in the ring with name = 0 (the variable is dropped)."""
        rest = tuple(v for v in self.vars if v != name)
        return Ideal(rest, self.m, tuple(g.restrict(name) for g in self.gens))

    def with_vars(self, vars: Sequence[str]) -> "Ideal":
        return Ideal(tuple(vars), self.m, tuple(g.with_vars(vars) for g in self.gens))

    def translate(self, point: Mapping[str, Point]) -> "Ideal":
        """Move the point to the origin: x ↦ x + p. Coordinates may be rationals or elements of A."""
        mapping = {v: Poly.var(v, self.vars, self.m) + _coordinate(point.get(v, 0), self.m) for v in self.vars}
        return self.substitute(mapping)

    # ------------------------------------------------------------------
    # orders
    # ------------------------------------------------------------------
    def order_along(self, names: Iterable[str]) -> int:
        """
        Largest s with I ⊆ (names)^s + (ε^m).

        The right side is a monomial ideal of Q[x, ε], so membership is termwise and any
        generating set gives the same value.

        Raises:
        - InfiniteOrder: for the zero ideal.
        """
        if self.is_zero():
            raise InfiniteOrder("Order of the zero ideal is infinite")
        names = list(names)
        return min(g.order_in(names) for g in self.gens)

    def order_at_point(self, point: Mapping[str, Point], level: str = "full") -> int:
        """Order of I at a point with coordinates in Q or A; level="fiber" reads the point mod ε."""
        ideal = self.fiber() if level == "fiber" else self
        return ideal.translate(point).order_along(self.vars)

    def order_along_poly(self, f: Poly, bound: int = 64) -> int:
        """Largest s with I ⊆ (f^s) + (ε^m), f a non-unit."""
        if self.is_zero():
            raise InfiniteOrder("Order of the zero ideal is infinite")
        if f.is_unit():
            raise BadInput(f"Order along the unit {f} is not defined")
        s = 0
        power = f
        while s < bound and Ideal(self.vars, self.m, (power,)).contains_ideal(self):
            s += 1
            power = power * f
        return s

    # ------------------------------------------------------------------
    # divisions
    # ------------------------------------------------------------------
    def divide_by_var_power(self, name: str, k: int) -> "Ideal":
        """
        Ideal J with I = name^k · J.

        Raises:
        - NotDivisible: with the index of the first generator outside (name^k).
        """
        out = []
        for i, g in enumerate(self.gens):
            try:
                out.append(g.divide_by_var_power(name, k))
            except NotDivisible as exc:
                raise NotDivisible(str(exc), index=i) from None
        return Ideal(self.vars, self.m, tuple(out))

    def divide_by_poly_power(self, f: Poly, k: int) -> "Ideal":
        """Exact division by f^k for an ε-free f, layer by layer."""
        if not f.is_eps_free():
            raise UnsupportedCenter(f"Division by {f} needs an ε-free divisor")
        syms = tuple(sympy.Symbol(v) for v in self.vars)
        divisor = sympy.Poly((f.fiber().to_sympy()) ** k, *syms, EPS, domain="QQ")
        out = []
        for i, g in enumerate(self.gens):
            q, r = sympy.div(sympy.Poly(g.to_sympy(), *syms, EPS, domain="QQ"), divisor)
            if not r.is_zero:
                raise NotDivisible(f"{g} is not divisible by ({f})^{k}", index=i)
            out.append(Poly.from_sympy(q.as_expr(), self.vars, self.m))
        return Ideal(self.vars, self.m, tuple(out))

    # ------------------------------------------------------------------
    # elimination
    # ------------------------------------------------------------------
    def _eliminate(self, exprs: List[sympy.Expr]) -> "Ideal":
        gens = (_T,) + self._symbols()
        basis = _groebner(tuple(exprs) + (EPS ** self.m,), gens, "lex")
        kept = [Poly.from_sympy(g, self.vars, self.m) for g in basis.exprs if not g.has(_T)]
        return Ideal(self.vars, self.m, tuple(kept)).canonical()

    def saturate(self, g: Poly) -> "Ideal":
        """I : g^∞."""
        if self.is_zero():
            return self
        exprs = [h.to_sympy() for h in self.gens] + [1 - _T * g.to_sympy()]
        return self._eliminate(exprs)

    def intersect(self, other: "Ideal") -> "Ideal":
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Ideal.zero(self.vars, self.m)
        exprs = [_T * h.to_sympy() for h in self.gens] + [(1 - _T) * h.to_sympy() for h in other.gens]
        return self._eliminate(exprs)

    def fiber_dimension(self) -> int:
        """Krull dimension of the fiber ideal in Q[x] (-1 for the unit ideal)."""
        if self.is_unit():
            return -1
        syms = tuple(sympy.Symbol(v) for v in self.vars)
        leads = []
        for expr in self._fiber_gb.exprs:
            if expr == EPS:
                continue
            lm = sympy.Poly(expr, *syms, domain="QQ").monoms(order="grevlex")[0]
            leads.append({i for i, e in enumerate(lm) if e})
        n = len(self.vars)
        for size in range(n, -1, -1):
            for subset in itertools.combinations(range(n), size):
                if not any(support <= set(subset) for support in leads):
                    return size
        return 0

    def fiber_gcd(self) -> Poly:
        """Square-free part of the gcd of the fiber generators (1 when there is none)."""
        if self.is_zero():
            raise InfiniteOrder("gcd of the zero ideal")
        syms = tuple(sympy.Symbol(v) for v in self.vars)
        g = sympy.Integer(0)
        for h in self.gens:
            g = sympy.gcd(g, h.fiber().to_sympy())
        if g.free_symbols & set(syms):
            g = sympy.sqf_part(sympy.Poly(g, *syms, domain="QQ")).monic().as_expr()
        else:
            g = sympy.Integer(1)
        return Poly.from_sympy(g, self.vars, 1)

    # ------------------------------------------------------------------
    # printing
    # ------------------------------------------------------------------
    def __str__(self) -> str:
        return format_ideal(self)

    def __repr__(self) -> str:
        return f"Ideal({format_ideal(self)!r}, vars={self.vars}, m={self.m})"


def parse_ideal(texts: Sequence[str], vars: Sequence[str], m: int) -> Ideal:
    return Ideal(tuple(vars), m, tuple(parse_poly(t, vars, m) for t in texts))


def format_ideal(ideal: Ideal) -> str:
    if ideal.is_zero():
        return "(0)"
    return "(" + ", ".join(str(g) for g in ideal.gens) + ")"


def monomial_exponents(ideal: Ideal) -> Optional[Dict[str, int]]:
    """Exponents of a principal monomial generator (unit coefficient), or None."""
    basis = ideal.basis()
    if len(basis) != 1 or len(basis[0].terms) != 1:
        return None
    (exp, coeff), = basis[0].terms
    if not coeff.is_unit():
        return None
    return {v: e for v, e in zip(ideal.vars, exp) if e}
