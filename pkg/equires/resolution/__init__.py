# equires/resolution/__init__.py

"""
Module: resolution

The resolution function on fibers, its coupled run over A, principalization and embedded
resolution built on top of it.

Functions:
- resolve_fiber(B) -> ResolutionTree
- equiresolve(B) -> EquiresReport
- principalize(T) -> PrincipalizationReport
- resolve_embedded(T) -> EmbeddedReport
"""

from equires.resolution.driver import ResolutionTree, Resolver, resolve_fiber
from equires.resolution.embedded import principalize, resolve_embedded
from equires.resolution.equires import EquiresReport, EquiresolutionRun, equiresolve

__all__ = [
    "EquiresReport",
    "EquiresolutionRun",
    "ResolutionTree",
    "Resolver",
    "equiresolve",
    "principalize",
    "resolve_embedded",
    "resolve_fiber",
]
