# equires/resolution/embedded.py

"""
Module: embedded.py

Principalization of id-triples and embedded resolution of subvarieties, both run through the
index-one basic object (W, I, 1, E).

Functions:
- principalize(T) -> PrincipalizationReport
- resolve_embedded(T) -> EmbeddedReport
- jacobian_minors(I, c) -> Ideal
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence

import sympy

from equires.exceptions import BadInput
from equires.models.basic_object import BasicObject, IdTriple
from equires.models.chart import BlowupRecord, CenterSpec, coordinate_var, validate_pair
from equires.operations.ideal import Ideal
from equires.operations.poly import Poly
from equires.resolution.driver import ResolutionTree
from equires.resolution.equires import EquiresReport, equiresolve
from equires.resolution.invariants import factorization_holds, monomial_data

logger = logging.getLogger(__name__)


def total_transforms(obj: BasicObject, records: Sequence[BlowupRecord]) -> Dict[str, Ideal]:
    """Pull the ideal of obj back through the blow-ups, dividing nothing."""
    totals = {cid: obj.ideal(cid) for cid in obj.chart_ids()}
    for record in records:
        totals = {t.child: t.pull_back(totals[t.parent]) for t in record.transitions}
    return totals


def strict_transforms(ideals: Mapping[str, Ideal], records: Sequence[BlowupRecord]) -> Dict[str, Ideal]:
    """Strict transforms by saturation with respect to each new exceptional equation."""
    current = dict(ideals)
    for record in records:
        nxt = {}
        for t in record.transitions:
            ideal = t.pull_back(current[t.parent])
            if t.exceptional is not None and not ideal.is_unit():
                ideal = ideal.saturate(t.exceptional)
            nxt[t.child] = ideal
        current = nxt
    return current


# ----------------------------------------------------------------------
# principalization
# ----------------------------------------------------------------------
@dataclass
class PrincipalizationReport:
    equires: EquiresReport
    monomial: bool
    exponents: Dict[str, Dict[str, int]] = field(default_factory=dict)
    already_monomial: bool = False

    @property
    def e(self) -> int:
        return self.equires.e

    @property
    def ell(self) -> int:
        return self.equires.ell

    @property
    def equiprincipalizable(self) -> bool:
        return self.equires.equisolvable and self.monomial


def _monomial_in_E(obj: BasicObject, ideals: Mapping[str, Ideal]):
    total = BasicObject(obj.pair, tuple((cid, ideals[cid]) for cid in obj.chart_ids()), 1, obj.step, obj.exceptional)
    exponents = {cid: monomial_data(total, cid) for cid in obj.chart_ids()}
    return all(factorization_holds(total, cid) for cid in obj.chart_ids()), exponents


def principalize(triple: IdTriple) -> PrincipalizationReport:
    """
    Equiresolve (W, I, 1, E) and check that the total transform at the end is a monomial in the
    members of E. An ideal that is already such a monomial needs no blow-up.
    """
    obj = triple.as_basic_object(1)
    monomial, exponents = _monomial_in_E(obj, dict(obj.ideals))
    if monomial:
        report = EquiresReport(ResolutionTree([obj.fiber()]), [obj])
        return PrincipalizationReport(report, True, exponents, already_monomial=True)
    report = equiresolve(obj)
    final = report.objects[-1]
    monomial, exponents = _monomial_in_E(final, total_transforms(obj, report.records))
    logger.info("principalization: e=%d, ell=%d, monomial=%s", report.e, report.ell, monomial)
    return PrincipalizationReport(report, monomial, exponents)


# ----------------------------------------------------------------------
# embedded resolution
# ----------------------------------------------------------------------
def jacobian_minors(ideal: Ideal, codim: int) -> Ideal:
    """The c×c minors of the Jacobian matrix of the fiber basis."""
    fib = ideal.fiber()
    basis = fib.basis()
    syms = [sympy.Symbol(v) for v in fib.vars]
    jac = sympy.Matrix([g.to_sympy() for g in basis]).jacobian(syms)
    minors = []
    for rows in itertools.combinations(range(jac.rows), codim):
        for cols in itertools.combinations(range(jac.cols), codim):
            det = sympy.expand(jac.extract(list(rows), list(cols)).det())
            minors.append(Poly.from_sympy(det, fib.vars, 1))
    return Ideal(fib.vars, 1, tuple(minors))


def codimension(ideal: Ideal) -> int:
    return len(ideal.vars) - ideal.fiber_dimension()


def is_smooth(ideal: Ideal, codim: Optional[int] = None) -> bool:
    """Jacobian criterion on the fiber; the empty variety counts as smooth."""
    if ideal.is_unit():
        return True
    codim = codimension(ideal) if codim is None else codim
    return (ideal.fiber() + jacobian_minors(ideal, codim)).is_unit()


def check_reduced(ideal: Ideal) -> None:
    """
    Raises:
    - BadInput: the fiber is empty, not reduced, or (for several generators) not generically
      reduced of pure codimension.
    """
    fib = ideal.fiber()
    if fib.is_unit() or fib.is_zero():
        raise BadInput(f"{ideal} does not define a proper subvariety")
    basis = fib.basis()
    if len(basis) == 1:
        f = basis[0]
        if not Ideal(fib.vars, 1, (fib.fiber_gcd(),)).equals(Ideal(fib.vars, 1, (f,))):
            raise BadInput(f"V({f}) is not reduced")
        return
    c = codimension(fib)
    singular = fib + jacobian_minors(fib, c)
    if singular.fiber_dimension() >= fib.fiber_dimension():
        raise BadInput(f"{ideal} is not generically reduced of codimension {c}")


def _is_center_component(obj: BasicObject, strict: Mapping[str, Ideal], center: CenterSpec) -> bool:
    """X_j nonempty and equal to the center on every chart where it is present."""
    present = [cid for cid, ideal in strict.items() if not ideal.is_unit()]
    if not present:
        return False
    for cid in present:
        cc = center.get(cid)
        if cc is None:
            return False
        chart = obj.chart(cid)
        if not cc.base_ideal(chart.vars, chart.m).equals(strict[cid]):
            return False
    return True


def _transversal(obj: BasicObject, strict: Mapping[str, Ideal], codim: int) -> bool:
    for cid, ideal in strict.items():
        if ideal.is_unit():
            continue
        for label, f in obj.pair.members_in(cid):
            v = coordinate_var(f)
            if v is None:
                continue
            restricted = ideal.restrict(v)
            if not restricted.is_unit() and not is_smooth(restricted, codim):
                return False
    return True


@dataclass
class EmbeddedReport:
    equires: EquiresReport
    eta: Optional[int]
    codim: int
    strict: Dict[str, Ideal] = field(default_factory=dict)
    smooth: bool = False
    snc: bool = False
    transversal: bool = False
    level: str = "A"

    @property
    def resolved_over_A(self) -> bool:
        return self.eta is not None and self.equires.e >= self.eta + 1

    def centers(self) -> List[Dict[str, str]]:
        upto = 0 if self.eta is None else self.eta + 1
        return self.equires.center_strings()[:upto]


def _find_eta(tree: ResolutionTree, x0: Mapping[str, Ideal]) -> Optional[int]:
    strict = dict(x0)
    for j, step in enumerate(tree.steps):
        if _is_center_component(tree.objects[j], strict, step.center):
            return j
        strict = strict_transforms(strict, [tree.records[j]])
    return None


def resolve_embedded(triple: IdTriple) -> EmbeddedReport:
    """
    Embedded resolution of X = V(I) through (W, I(X), 1, E).

    η is the first step whose center contains the strict transform X_η as a union of components.
    Over A the conditions E_0, ..., E_η must hold; the report carries X_η per chart, its
    smoothness, the normal crossings of E and the transversality of X_η to E.

    Raises:
    - BadInput: the fiber of X is not reduced (or not of pure codimension).
    """
    obj = triple.as_basic_object(1)
    for cid in obj.chart_ids():
        check_reduced(obj.ideal(cid))
    codim = codimension(obj.ideal(obj.chart_ids()[0]))
    report = equiresolve(obj)
    fiber_x = {cid: obj.ideal(cid).fiber() for cid in obj.chart_ids()}
    eta = _find_eta(report.tree, fiber_x)
    if eta is None:
        logger.warning("strict transform never became a component of a center")
        return EmbeddedReport(report, None, codim)

    if report.e >= eta:
        level, base, records = "A", report.objects[eta], report.records[:eta]
        strict = strict_transforms({cid: obj.ideal(cid) for cid in obj.chart_ids()}, records)
    else:
        level, base, records = "fiber", report.tree.objects[eta], report.tree.records[:eta]
        strict = strict_transforms(fiber_x, records)
    strict = {cid: ideal for cid, ideal in strict.items() if not ideal.is_unit()}
    smooth = all(is_smooth(ideal, codim) for ideal in strict.values())
    snc = not validate_pair(base.pair, allow_divisors=True)
    result = EmbeddedReport(report, eta, codim, strict, smooth, snc, _transversal(base, strict, codim), level)
    logger.info(
        "embedded resolution: eta=%d, e=%d, smooth=%s, snc=%s", eta, report.e, smooth, snc
    )
    return result
