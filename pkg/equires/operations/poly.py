# equires/operations/poly.py

"""
Module: poly.py

Polynomials in A[x_1..x_n] with A = Q[ε]/(ε^m). A Poly stores a mapping from exponent
vectors to nonzero ArtinScalar coefficients; zero coefficients are never stored, so
equal polynomials compare and hash equal.

Functions:
- parse_poly(text, vars, m) -> Poly: reads the canonical grammar (`3/2*eps*x^2*y - z`).
- format_poly(p) -> str: canonical printing, graded reverse lexicographic terms.
- grevlex_key(exponent) -> tuple: sort key of the monomial order used for printing.

Usage:
>>> f = parse_poly("y^2 + eps*x^3", ("x", "y"), 2)
>>> str(f.diff("x"))
'3*eps*x^2'
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from tokenize import TokenError
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from equires.exceptions import BadInput, InfiniteOrder, NotDivisible, UnknownVariable
from equires.operations.scalar import ArtinScalar

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]

EPS_NAME = "eps"
EPS = sympy.Symbol(EPS_NAME)
_TRANSFORMS = standard_transformations + (convert_xor,)


def grevlex_key(exponent: Exponent) -> Tuple:
    return (sum(exponent), tuple(-e for e in reversed(exponent)))


def _rational(value) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


@dataclass(frozen=True)
class Poly:
    vars: Tuple[str, ...]
    m: int
    terms: Tuple[Tuple[Exponent, ArtinScalar], ...]

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def from_dict(cls, vars: Sequence[str], m: int, terms: Mapping[Exponent, ArtinScalar]) -> "Poly":
        kept = [(e, c) for e, c in terms.items() if not c.is_zero()]
        kept.sort(key=lambda t: grevlex_key(t[0]), reverse=True)
        return cls(tuple(vars), m, tuple(kept))

    @classmethod
    def zero(cls, vars: Sequence[str], m: int) -> "Poly":
        return cls(tuple(vars), m, ())

    @classmethod
    def constant(cls, value, vars: Sequence[str], m: int) -> "Poly":
        scalar = value if isinstance(value, ArtinScalar) else ArtinScalar.constant(value, m)
        return cls.from_dict(vars, m, {(0,) * len(vars): scalar})

    @classmethod
    def one(cls, vars: Sequence[str], m: int) -> "Poly":
        return cls.constant(1, vars, m)

    @classmethod
    def var(cls, name: str, vars: Sequence[str], m: int) -> "Poly":
        vars = tuple(vars)
        if name not in vars:
            raise UnknownVariable(f"Unknown variable: {name}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls.from_dict(vars, m, {exp: ArtinScalar.one(m)})

    @classmethod
    def eps(cls, vars: Sequence[str], m: int, power: int = 1) -> "Poly":
        return cls.constant(ArtinScalar.eps_power(power, m), vars, m)

    def as_dict(self) -> Dict[Exponent, ArtinScalar]:
        return dict(self.terms)

    # ------------------------------------------------------------------
    # ring structure
    # ------------------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars or other.m != self.m:
                raise BadInput(
                    f"Incompatible polynomial rings: {self.vars}/m={self.m} vs {other.vars}/m={other.m}"
                )
            return other
        if isinstance(other, (int, Fraction, ArtinScalar)):
            return Poly.constant(other, self.vars, self.m)
        raise TypeError(f"Unsupported operand type for Poly: {type(other).__name__}")

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out[e] + c if e in out else c
        return Poly.from_dict(self.vars, self.m, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.vars, self.m, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: Dict[Exponent, ArtinScalar] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                out[e] = out[e] + c if e in out else c
        return Poly.from_dict(self.vars, self.m, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.one(self.vars, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # ------------------------------------------------------------------
    # predicates and measures
    # ------------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> ArtinScalar:
        return self.as_dict().get((0,) * len(self.vars), ArtinScalar.zero(self.m))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e, _ in self.terms)

    def is_unit(self) -> bool:
        """A unit of A[x]: constant term a unit and every other coefficient nilpotent."""
        if not self.constant_term().is_unit():
            return False
        return all(sum(e) == 0 or c.fiber() == 0 for e, c in self.terms)

    def is_eps_free(self) -> bool:
        return all(c.is_constant() for _, c in self.terms)

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def used_vars(self) -> Tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.vars) if any(e[i] for e, _ in self.terms))

    def free_of(self, name: str) -> bool:
        return name not in self.used_vars()

    def _index(self, name: str) -> int:
        try:
            return self.vars.index(name)
        except ValueError:
            raise UnknownVariable(f"Unknown variable: {name}") from None

    def order_in(self, names: Iterable[str]) -> int:
        """Smallest total degree in the given variables over all terms."""
        if self.is_zero():
            raise InfiniteOrder("Order of the zero polynomial is infinite")
        idx = [self._index(n) for n in names]
        return min(sum(e[i] for i in idx) for e, _ in self.terms)

    def valuation(self) -> int:
        """Smallest ε-power appearing in some coefficient (m for zero)."""
        return min((c.valuation() for _, c in self.terms), default=self.m)

    # ------------------------------------------------------------------
    # calculus and substitutions
    # ------------------------------------------------------------------
    def diff(self, name: str) -> "Poly":
        i = self._index(name)
        out: Dict[Exponent, ArtinScalar] = {}
        for e, c in self.terms:
            if e[i] == 0:
                continue
            e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
            out[e2] = c * e[i]
        return Poly.from_dict(self.vars, self.m, out)

    def substitute(self, mapping: Mapping[str, "Poly"], vars_out: Optional[Sequence[str]] = None) -> "Poly":
        """
        Replace variables by polynomials. Variables not in mapping are kept and must exist
        in vars_out (defaults to self.vars).
        """
        vars_out = tuple(vars_out) if vars_out is not None else self.vars
        images: List[Poly] = []
        for v in self.vars:
            if v in mapping:
                images.append(mapping[v])
            elif v in vars_out:
                images.append(Poly.var(v, vars_out, self.m))
            else:
                images.append(None)
        powers: Dict[Tuple[int, int], Poly] = {}
        result = Poly.zero(vars_out, self.m)
        for e, c in self.terms:
            term = Poly.constant(c, vars_out, self.m)
            for i, k in enumerate(e):
                if k == 0:
                    continue
                if images[i] is None:
                    raise UnknownVariable(f"No image for variable {self.vars[i]}")
                if (i, k) not in powers:
                    powers[(i, k)] = images[i] ** k
                term = term * powers[(i, k)]
            result = result + term
        return result

    def restrict(self, name: str) -> "Poly":
        """Set name = 0 and drop it from the variable list."""
        i = self._index(name)
        rest = self.vars[:i] + self.vars[i + 1:]
        out = {e[:i] + e[i + 1:]: c for e, c in self.terms if e[i] == 0}
        return Poly.from_dict(rest, self.m, out)

    def with_vars(self, vars: Sequence[str]) -> "Poly":
        """Re-embed into a ring whose variables contain the used variables."""
        vars = tuple(vars)
        idx = {v: i for i, v in enumerate(self.vars)}
        for v in self.used_vars():
            if v not in vars:
                raise UnknownVariable(f"Variable {v} missing from {vars}")
        out = {}
        for e, c in self.terms:
            out[tuple(e[idx[v]] if v in idx else 0 for v in vars)] = c
        return Poly.from_dict(vars, self.m, out)

    def min_power(self, name: str) -> int:
        i = self._index(name)
        if self.is_zero():
            raise InfiniteOrder("Order of the zero polynomial is infinite")
        return min(e[i] for e, _ in self.terms)

    def divide_by_var_power(self, name: str, k: int) -> "Poly":
        i = self._index(name)
        out = {}
        for e, c in self.terms:
            if e[i] < k:
                raise NotDivisible(f"{self} is not divisible by {name}^{k}")
            out[e[:i] + (e[i] - k,) + e[i + 1:]] = c
        return Poly.from_dict(self.vars, self.m, out)

    def scale(self, c: ArtinScalar) -> "Poly":
        return Poly.from_dict(self.vars, self.m, {e: a * c for e, a in self.terms})

    # ------------------------------------------------------------------
    # base ring changes
    # ------------------------------------------------------------------
    def fiber(self) -> "Poly":
        return self.truncate(1)

    def truncate(self, m_new: int) -> "Poly":
        return Poly.from_dict(self.vars, m_new, {e: c.truncate(m_new) for e, c in self.terms})

    def lift(self, m_new: int) -> "Poly":
        """Read the coefficients in Q[ε]/(ε^m_new), m_new ≥ m (identity on coefficient vectors)."""
        return Poly.from_dict(self.vars, m_new, {e: ArtinScalar(c.coeffs, m_new) for e, c in self.terms})

    def layers(self) -> List["Poly"]:
        """Q-polynomials f_k with self = Σ ε^k f_k."""
        out = []
        for k in range(self.m):
            out.append(
                Poly.from_dict(self.vars, 1, {e: ArtinScalar.constant(c.coeffs[k], 1) for e, c in self.terms})
            )
        return out

    # ------------------------------------------------------------------
    # sympy bridge
    # ------------------------------------------------------------------
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(v) for v in self.vars)

    def to_sympy(self) -> sympy.Expr:
        syms = self.symbols()
        expr = sympy.Integer(0)
        for e, c in self.terms:
            mono = sympy.Mul(*[s ** k for s, k in zip(syms, e)])
            for k, q in enumerate(c.coeffs):
                if q != 0:
                    expr += sympy.Rational(q.numerator, q.denominator) * EPS ** k * mono
        return expr

    @classmethod
    def from_sympy(cls, expr, vars: Sequence[str], m: int) -> "Poly":
        vars = tuple(vars)
        gens = tuple(sympy.Symbol(v) for v in vars) + (EPS,)
        try:
            p = sympy.Poly(sympy.expand(expr), *gens, domain="QQ")
        except (sympy.PolynomialError, sympy.CoercionFailed) as exc:
            raise BadInput(f"Not a polynomial in {vars} over Q[eps]: {expr}") from exc
        out: Dict[Exponent, List[Fraction]] = {}
        for monom, coeff in p.terms():
            k = monom[-1]
            if k >= m:
                continue
            out.setdefault(tuple(monom[:-1]), [Fraction(0)] * m)[k] += _rational(coeff)
        return cls.from_dict(vars, m, {e: ArtinScalar(tuple(cs), m) for e, cs in out.items()})

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, vars={self.vars}, m={self.m})"


def _format_monomial(coeff: Fraction, k: int, exponent: Exponent, vars: Sequence[str]) -> str:
    factors = []
    if k == 1:
        factors.append(EPS_NAME)
    elif k > 1:
        factors.append(f"{EPS_NAME}^{k}")
    for v, e in zip(vars, exponent):
        if e == 1:
            factors.append(v)
        elif e > 1:
            factors.append(f"{v}^{e}")
    magnitude = abs(coeff)
    if not factors:
        body = str(magnitude)
    elif magnitude == 1:
        body = "*".join(factors)
    else:
        body = f"{magnitude}*" + "*".join(factors)
    return ("-" if coeff < 0 else "+") + body


def format_poly(p: Poly) -> str:
    pieces = []
    for e, c in p.terms:
        for k, q in enumerate(c.coeffs):
            if q != 0:
                pieces.append(_format_monomial(q, k, e, p.vars))
    if not pieces:
        return "0"
    text = pieces[0][1:] if pieces[0][0] == "+" else pieces[0]
    for piece in pieces[1:]:
        text += f" {piece[0]} {piece[1:]}"
    return text


def parse_poly(text: str, vars: Sequence[str], m: int) -> Poly:
    """
    Parse a polynomial over A = Q[eps]/(eps^m) in the given variables.

    Raises:
    - BadInput: unknown identifiers, non-rational coefficients or non-polynomial text.
    """
    vars = tuple(vars)
    local = {v: sympy.Symbol(v) for v in vars}
    local[EPS_NAME] = EPS
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except (sympy.SympifyError, SyntaxError, TypeError, TokenError, NameError, AttributeError) as exc:
        raise BadInput(f"Cannot parse polynomial {text!r}: {exc}") from exc
    if not isinstance(expr, sympy.Expr):
        raise BadInput(f"Cannot parse polynomial {text!r}")
    unknown = {str(s) for s in expr.free_symbols} - set(vars) - {EPS_NAME}
    if unknown:
        raise BadInput(f"Unknown identifiers in {text!r}: {sorted(unknown)}")
    for atom in expr.atoms(sympy.Number):
        if not atom.is_Rational:
            raise BadInput(f"Non-rational coefficient {atom} in {text!r}")
    if expr.has(sympy.I):
        raise BadInput(f"Non-rational coefficient in {text!r}")
    return Poly.from_sympy(expr, vars, m)
