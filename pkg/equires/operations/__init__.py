# equires/operations/__init__.py

"""
Module: operations

Exact algebra over the Artin ring A = Q[ε]/(ε^m): scalars, polynomials in A[x], ideals with
Gröbner-backed membership, and the Δ operator. Everything here is a pure function or an
immutable value; higher layers build the geometry on top of it.

Functions:
- parse_poly / format_poly: canonical text form of polynomials.
- parse_ideal / format_ideal: canonical text form of ideals.
- delta / delta_power / singular_ideal: the differential operator and its iterates.

Usage:
>>> I = parse_ideal(["y^2", "x^3"], ("x", "y"), 1)
>>> str(delta(I))
'(y, x^2)'
"""

from equires.operations.delta import (
    DeltaCache,
    VarietyDescription,
    delta,
    delta_cache,
    delta_power,
    singular_ideal,
    variety,
)
from equires.operations.ideal import Ideal, format_ideal, groebner_basis, parse_ideal
from equires.operations.poly import EPS_NAME, Poly, format_poly, parse_poly
from equires.operations.scalar import ArtinScalar

__all__ = [
    "ArtinScalar",
    "DeltaCache",
    "EPS_NAME",
    "Ideal",
    "Poly",
    "VarietyDescription",
    "delta",
    "delta_cache",
    "delta_power",
    "format_ideal",
    "format_poly",
    "groebner_basis",
    "parse_ideal",
    "parse_poly",
    "singular_ideal",
    "variety",
]
