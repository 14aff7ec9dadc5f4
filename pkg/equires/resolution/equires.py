# equires/resolution/equires.py

"""
Module: equires.py

Partial algorithmic equiresolution over A = Q[ε]/(ε^m).

The fiber object is resolved first. Its sequence is then mirrored over A step by step: at step
j the condition E_j asks for a center over A whose fiber is the fiber center of step j and which
is permissible in the sense the step kind requires. The first step where that fails fixes e(B);
when every step passes, e(B) = ℓ(B⁰) and B is algorithmically equisolvable.

Functions:
- equiresolve(B) -> EquiresReport
- truncation_probe(B, m′) -> TruncationProbe
- chart_restriction_probe(B, chart) -> ChartRestrictionProbe
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from equires.exceptions import (
    A3Breach,
    AlgorithmStuck,
    NotMonomial,
    PermissibilityError,
    UnsupportedCenter,
)
from equires.models.basic_object import BasicObject
from equires.models.chart import BlowupRecord, CenterSpec, ChartCenter, apply_changes, normalize_center
from equires.operations.delta import singular_ideal
from equires.operations.ideal import Ideal
from equires.operations.scalar import ArtinScalar
from equires.resolution.contact import (
    AdaptedHypersurface,
    check_adapted,
    find_adapted_hypersurfaces,
    inductive_object,
    split_linear,
)
from equires.resolution.driver import (
    CARRYOVER,
    MONOMIAL,
    T_CODIM1,
    T_INDUCTIVE,
    InductiveBlock,
    ResolutionTree,
    Resolver,
    StepRecord,
    center_strings,
    same_center,
    scale_only_vars,
)
from equires.resolution.invariants import b_doubleprime, gamma

logger = logging.getLogger(__name__)

NO_PERMISSIBLE_LIFT = "NO_PERMISSIBLE_LIFT"
NOT_STRONGLY_PERMISSIBLE = "NOT_STRONGLY_PERMISSIBLE"
PREMONOMIAL_NOT_MONOMIAL = "PREMONOMIAL_NOT_MONOMIAL"
INDUCTIVE_NOT_EQUISOLVABLE = "INDUCTIVE_NOT_EQUISOLVABLE"
UNSUPPORTED_LIFT = "UNSUPPORTED_LIFT"
WELL_DEFINEDNESS = "WELL_DEFINEDNESS"


@dataclass(frozen=True)
class WellDefinednessFlag:
    """Two computations that must agree did not (a fiber or an overlap mismatch)."""

    j: int
    where: str
    message: str


@dataclass(frozen=True)
class Failure:
    j: int
    clause: str
    message: str


@dataclass
class ConditionResult:
    j: int
    valid: bool
    center: Optional[CenterSpec] = None
    failure: Optional[Failure] = None
    flags: List[WellDefinednessFlag] = field(default_factory=list)


@dataclass
class EquiresReport:
    tree: ResolutionTree
    objects: List[BasicObject]
    e: int = 0
    centers: List[CenterSpec] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)
    records: List[BlowupRecord] = field(default_factory=list)
    failure: Optional[Failure] = None
    flags: List[WellDefinednessFlag] = field(default_factory=list)
    truncation_ok: bool = True

    @property
    def ell(self) -> int:
        return self.tree.ell

    @property
    def equisolvable(self) -> bool:
        return self.failure is None and self.e == self.ell

    def center_strings(self) -> List[Dict[str, str]]:
        return [center_strings(obj, c) for obj, c in zip(self.objects, self.centers)]


class EquiresolutionRun:
    """
    Mirrors a fiber resolution over A. check_condition must be called for j = 0, 1, ... in order,
    each valid step being applied before the next one is checked (run() does both).
    """

    def __init__(self, obj: BasicObject, tree: Optional[ResolutionTree] = None, depth: int = 0):
        self.obj = obj
        self.depth = depth
        self.tree = tree if tree is not None else Resolver(obj.fiber(), depth).run()
        self.block: Optional[InductiveBlock] = None

    # ------------------------------------------------------------------
    # E_j
    # ------------------------------------------------------------------
    def check_condition(self, j: int) -> ConditionResult:
        if j >= self.tree.ell:
            return ConditionResult(j, True)
        step = self.tree.steps[j]
        flags: List[WellDefinednessFlag] = []
        try:
            if step.kind == MONOMIAL:
                self.block = None
                center = self._monomial_center(step)
            elif step.kind == T_CODIM1:
                self.block = None
                center = self._codim_one_center(step)
            elif step.kind == T_INDUCTIVE:
                center = self._inductive_center(step, flags)
            else:
                center = self._block_center(step)
        except PermissibilityError as exc:
            return ConditionResult(j, False, failure=Failure(j, exc.clause, str(exc)), flags=flags)
        if not self._lifts(center, step.center):
            message = f"A-level center {center_strings(self.obj, center)} does not lift {step.centers}"
            flags.append(WellDefinednessFlag(j, "fiber", message))
            return ConditionResult(j, False, failure=Failure(j, WELL_DEFINEDNESS, message), flags=flags)
        return ConditionResult(j, True, center, flags=flags)

    def _lifts(self, center: CenterSpec, fiber_center: CenterSpec) -> bool:
        for cid in fiber_center.present_charts():
            a, b = center.get(cid), fiber_center.get(cid)
            if a is None or sorted(a.vars) != sorted(b.vars) or (a.divisor is None) != (b.divisor is None):
                return False
        return same_center(self.obj, center.fiber(), fiber_center)

    def _monomial_center(self, step: StepRecord) -> CenterSpec:
        try:
            center = gamma(self.obj).center
        except NotMonomial as exc:
            raise PermissibilityError(str(exc), clause=PREMONOMIAL_NOT_MONOMIAL) from exc
        verdict = self.obj.is_permissible_center(center)
        if not verdict.ok:
            raise PermissibilityError(
                "Canonical center is not permissible over A: " + "; ".join(verdict.diagnostics()),
                clause=PREMONOMIAL_NOT_MONOMIAL,
            )
        return center

    def _codim_one_center(self, step: StepRecord) -> CenterSpec:
        b2 = b_doubleprime(self.obj, step.kmax, step.e_minus, step.pieces)
        components = {cid: None for cid in self.obj.chart_ids()}
        for cid in step.center.present_charts():
            chart = self.obj.chart(cid)
            top = singular_ideal(b2.ideal(cid), b2.b)
            if not top.fiber().equals(step.center.get(cid).base_ideal(chart.vars, 1)):
                raise PermissibilityError(
                    f"Δ^(b''-1) on {cid} has more components than the codimension-one center", clause=UNSUPPORTED_LIFT
                )
            # the fiber change is lifted as is; only an ε-correction on top of it is searched
            lifted = tuple(c.lift(chart.m) for c in step.center.get(cid).changes)
            try:
                cc = normalize_center(
                    apply_changes(top, lifted), self.obj.pair.e_vars(cid).values(), require_fiber_identity=True
                )
            except UnsupportedCenter as exc:
                raise PermissibilityError(
                    f"Δ^(b''-1) on {cid} defines no permissible center over A: {exc}", clause=NO_PERMISSIBLE_LIFT
                ) from exc
            components[cid] = ChartCenter(lifted + cc.changes, cc.vars, cc.divisor)
        center = CenterSpec.of(components)
        for target in (b2, self.obj):
            verdict = target.is_permissible_center(center)
            if not verdict.ok:
                raise PermissibilityError(
                    "Lifted center is not permissible: " + "; ".join(verdict.diagnostics()), clause=NO_PERMISSIBLE_LIFT
                )
        return center

    def _lift_hypersurface(self, b2: BasicObject, chart_id: str, fiber_hyp: AdaptedHypersurface, e_minus) -> AdaptedHypersurface:
        target = Ideal(fiber_hyp.equation.vars, 1, (fiber_hyp.equation,))
        c0, _ = split_linear(fiber_hyp.equation, fiber_hyp.var)
        for hyp in find_adapted_hypersurfaces(b2, chart_id, scale_only_vars(self.obj, chart_id, e_minus)):
            if hyp.var != fiber_hyp.var:
                continue
            if not Ideal(target.vars, 1, (hyp.equation.fiber(),)).equals(target):
                continue
            c, _ = split_linear(hyp.equation, hyp.var)
            f = hyp.equation.scale(ArtinScalar.constant(c0.fiber() / c.fiber(), hyp.equation.m))
            return check_adapted(b2, chart_id, f, hyp.var)
        raise PermissibilityError(f"No adapted hypersurface over A lifts {fiber_hyp} on {chart_id}", clause=UNSUPPORTED_LIFT)

    def _inductive_center(self, step: StepRecord, flags: List[WellDefinednessFlag]) -> CenterSpec:
        b2 = b_doubleprime(self.obj, step.kmax, step.e_minus, step.pieces).restrict_charts(list(step.pieces))
        contacts = {
            cid: self._lift_hypersurface(b2, cid, hyp, step.e_minus) for cid, hyp in step.contacts.items()
        }
        try:
            lower_obj = inductive_object(b2, contacts)
            lower = EquiresolutionRun(lower_obj, depth=self.depth + 1).run()
        except (A3Breach, UnsupportedCenter, AlgorithmStuck) as exc:
            raise PermissibilityError(f"Inductive object over A: {exc}", clause=UNSUPPORTED_LIFT) from exc
        if not lower.equisolvable:
            reason = lower.failure.clause if lower.failure else "incomplete"
            raise PermissibilityError(
                f"Inductive object is not equisolvable: e={lower.e} < ell={lower.ell} ({reason})",
                clause=INDUCTIVE_NOT_EQUISOLVABLE,
            )
        fiber_lower = step.lower
        agree = fiber_lower is not None and fiber_lower.ell == lower.ell and all(
            same_center(fiber_lower.objects[k], lower.centers[k].fiber(), fiber_lower.steps[k].center)
            for k in range(lower.ell)
        )
        if not agree:
            message = "inductive object over A resolves differently from the fiber inductive object"
            flags.append(WellDefinednessFlag(step.j, "inductive", message))
            raise PermissibilityError(message, clause=WELL_DEFINEDNESS)
        self.block = InductiveBlock.start(step.max_t, lower.centers, contacts)
        return self._block_center(step)

    def _block_center(self, step: StepRecord) -> CenterSpec:
        if self.block is None or self.block.exhausted():
            raise PermissibilityError("No inductive block over A to continue", clause=UNSUPPORTED_LIFT)
        try:
            center = self.block.lift(self.obj)
        except (AlgorithmStuck, UnsupportedCenter) as exc:
            raise PermissibilityError(str(exc), clause=UNSUPPORTED_LIFT) from exc
        b2 = b_doubleprime(self.obj, step.kmax, step.e_minus, step.pieces)
        for target in (self.obj, b2):
            verdict = target.is_permissible_center(center)
            if not verdict.ok:
                raise PermissibilityError(
                    "Lifted center of the inductive object is not permissible: " + "; ".join(verdict.diagnostics()),
                    clause=NOT_STRONGLY_PERMISSIBLE,
                )
        return center

    # ------------------------------------------------------------------
    # the run
    # ------------------------------------------------------------------
    def run(self) -> EquiresReport:
        report = EquiresReport(self.tree, [self.obj])
        for j in range(self.tree.ell):
            result = self.check_condition(j)
            report.flags.extend(result.flags)
            if not result.valid:
                report.failure = result.failure
                logger.warning("condition E_%d fails: %s (%s)", j, result.failure.clause, result.failure.message)
                break
            step = self.tree.steps[j]
            new, record = self.obj.transform_with_record(result.center, step.label, check=False)
            if step.kind in (T_INDUCTIVE, CARRYOVER):
                self.block.advance(new)
            if not new.fiber().same_as(self.tree.objects[j + 1]):
                report.truncation_ok = False
                logger.warning("fiber of the A-level transform differs from the fiber sequence at step %d", j)
            self.obj = new
            report.objects.append(new)
            report.centers.append(result.center)
            report.labels.append(step.label)
            report.records.append(record)
            report.e = j + 1
        logger.info("e(B)=%d, ell=%d, equisolvable=%s", report.e, report.ell, report.equisolvable)
        return report


def equiresolve(obj: BasicObject) -> EquiresReport:
    """
    e(B), ℓ(B⁰), the A-permissible sequence and, if any, the clause of the first failed condition.

    Raises:
    - AlgorithmStuck: from the fiber resolution.
    """
    return EquiresolutionRun(obj).run()


# ----------------------------------------------------------------------
# functoriality probes
# ----------------------------------------------------------------------
@dataclass
class TruncationProbe:
    m: int
    e: int
    m_truncated: int
    e_truncated: int
    centers_agree: bool

    @property
    def ok(self) -> bool:
        return self.e_truncated >= self.e and self.centers_agree


def truncation_probe(obj: BasicObject, m_new: int) -> TruncationProbe:
    """Compare equiresolution of B with that of its image under Q[ε]/(ε^m) → Q[ε]/(ε^m′)."""
    full = equiresolve(obj)
    truncated = equiresolve(obj.truncate(m_new))
    agree = True
    for k in range(min(full.e, truncated.e)):
        base = truncated.objects[k]
        for cid in full.centers[k].present_charts():
            other = truncated.centers[k].get(cid)
            if other is None:
                agree = False
                continue
            chart = base.chart(cid)
            mapped = full.centers[k].get(cid).base_ideal(chart.vars, obj.m).truncate(m_new)
            if not mapped.equals(other.base_ideal(chart.vars, m_new)):
                agree = False
    return TruncationProbe(obj.m, full.e, m_new, truncated.e, agree)


@dataclass
class ChartRestrictionProbe:
    chart: str
    full: List[Dict[str, Ideal]]
    restricted: List[Dict[str, Ideal]]

    @property
    def agree(self) -> bool:
        if len(self.full) != len(self.restricted):
            return False
        for a, b in zip(self.full, self.restricted):
            if sorted(a) != sorted(b) or not all(a[cid].equals(b[cid]) for cid in a):
                return False
        return True


def _descendant_centers(report: EquiresReport, chart_id: str) -> List[Dict[str, Ideal]]:
    out = []
    for obj, center in zip(report.objects, report.centers):
        local = {}
        for cid, cc in center.components:
            if cc is None or not (cid == chart_id or cid.startswith(chart_id + ".")):
                continue
            chart = obj.chart(cid)
            local[cid] = cc.base_ideal(chart.vars, chart.m)
        if local:
            out.append(local)
    return out


def chart_restriction_probe(obj: BasicObject, chart_id: str) -> ChartRestrictionProbe:
    """Centers of the sequence restricted to one chart against the sequence of the restricted object."""
    full = equiresolve(obj)
    restricted = equiresolve(obj.restrict_charts([chart_id]))
    return ChartRestrictionProbe(
        chart_id, _descendant_centers(full, chart_id), _descendant_centers(restricted, chart_id)
    )
