# equires/models/basic_object.py

"""
Module: basic_object.py

Basic objects B = (W, I, b, E) over A = Q[ε]/(ε^m) and id-triples (W, I, E), stored chart by
chart. I is the controlled ideal of the current stage; the proper transform Ī is obtained by
factoring out the largest powers of the exceptional hypersurfaces born in the sequence.

Classes:
- BasicObject: fiber, singular locus, permissibility, transform, truncation.
- IdTriple: an ideal on an S-pair without an index.
- PermissibilityVerdict: per-chart orders ν(I, C), ν(I⁽⁰⁾, C⁽⁰⁾) and the verdict.

Functions:
- proper_transform_exponent(B, C, chart) -> int
- pre_equivalence_probe(B, B2, sequences) -> ProbeReport
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from equires.exceptions import BadInput, InvariantBreach, NotDivisible, PermissibilityError, UnsupportedCenter
from equires.models.chart import (
    BlowupRecord,
    CenterSpec,
    Chart,
    ChartCenter,
    CoordinateChange,
    Hypersurface,
    SPair,
    apply_changes,
    blowup,
    coordinate_var,
    normalize_center,
    rewrite_members,
)
from equires.operations.delta import VarietyDescription, delta_power, singular_ideal, variety
from equires.operations.ideal import Ideal

logger = logging.getLogger(__name__)

ROOT_CHART = "c0"


def divide_exceptional(ideal: Ideal, f, k: int) -> Ideal:
    """Exact division of an ideal by f^k, f a coordinate variable or an ε-free divisor."""
    v = coordinate_var(f)
    if v is not None:
        return ideal.divide_by_var_power(v, k)
    return ideal.divide_by_poly_power(f, k)


def order_along_member(ideal: Ideal, f) -> int:
    v = coordinate_var(f)
    if v is not None:
        return ideal.order_along([v])
    return ideal.order_along_poly(f)


def order_along_center(ideal: Ideal, cc: ChartCenter, level: str = "full") -> int:
    """ν(I, C) for a center component given in coordinate form."""
    if level == "fiber":
        ideal = ideal.fiber()
        changes = [c.fiber() for c in cc.changes]
    else:
        changes = list(cc.changes)
    moved = apply_changes(ideal, changes)
    if cc.divisor is not None:
        d = cc.divisor.fiber() if level == "fiber" else cc.divisor
        return moved.order_along_poly(d)
    return moved.order_along(cc.vars)


@dataclass(frozen=True)
class ChartVerdict:
    chart: str
    nu: int
    nu_fiber: int
    in_sing: bool
    fast_path: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return self.in_sing and self.nu == self.nu_fiber

    @property
    def fast_path_agrees(self) -> bool:
        """True when the good-object test was skipped or matches the order comparison."""
        return self.fast_path is None or self.fast_path == self.ok


@dataclass(frozen=True)
class PermissibilityVerdict:
    ok: bool
    charts: Tuple[ChartVerdict, ...]

    def failing(self) -> List[ChartVerdict]:
        return [c for c in self.charts if not c.ok]

    def disagreements(self) -> List[str]:
        """Charts where the good-object test and the order comparison give different answers."""
        return [c.chart for c in self.charts if not c.fast_path_agrees]

    def diagnostics(self) -> List[str]:
        return [
            f"{c.chart}: nu={c.nu}, nu0={c.nu_fiber}, in_sing={c.in_sing}"
            + ("" if c.fast_path_agrees else f", fast path says {c.fast_path}")
            for c in self.charts
        ]


@dataclass(frozen=True)
class BasicObject:
    pair: SPair
    ideals: Tuple[Tuple[str, Ideal], ...]
    b: int
    step: int = 0
    exceptional: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.b < 1:
            raise BadInput(f"Index b must be at least 1, got {self.b}")
        ids = {cid for cid, _ in self.ideals}
        if ids != set(self.pair.chart_ids()):
            raise BadInput(f"Ideals given on charts {sorted(ids)} but the pair has {self.pair.chart_ids()}")
        for cid, ideal in self.ideals:
            if ideal.fiber().is_zero():
                raise InvariantBreach(f"Ideal on chart {cid} has zero fiber")

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------
    @classmethod
    def create(
        cls,
        ideal: Ideal,
        b: int,
        E: Sequence[Tuple[str, object]] = (),
        exceptional: Sequence[str] = (),
        chart_id: str = ROOT_CHART,
    ) -> "BasicObject":
        """
        Build a one-chart object on A^n. E-members are given as (label, Poly) and are normalized
        to coordinate hypersurfaces; the coordinate changes used are logged on the chart.

        Raises:
        - BadInput: E not normalizable to normal crossings, or unknown exceptional labels.
        """
        if ideal.fiber().is_zero():
            raise BadInput(f"Ideal {ideal} has zero fiber")
        chart = Chart(chart_id, ideal.vars, ideal.m)
        pair = SPair((chart,), tuple(Hypersurface(lab, ((chart_id, f),)) for lab, f in E))
        pair, ideal = normalize_members(pair, ideal, chart_id)
        labels = [lab for lab, _ in E]
        unknown = [lab for lab in exceptional if lab not in labels]
        if unknown:
            raise BadInput(f"Exceptional labels {unknown} are not E-members")
        ordered = tuple(lab for lab in labels if lab in set(exceptional))
        return cls(pair, ((chart_id, ideal),), b, 0, ordered)

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------
    @property
    def m(self) -> int:
        return self.pair.m

    @property
    def dim(self) -> int:
        return self.pair.dim

    def chart_ids(self) -> List[str]:
        return [cid for cid, _ in self.ideals]

    def ideal(self, chart_id: str) -> Ideal:
        return dict(self.ideals)[chart_id]

    def chart(self, chart_id: str) -> Chart:
        return self.pair.chart(chart_id)

    def exceptional_members(self, chart_id: str) -> List[Tuple[str, object]]:
        return [(lab, f) for lab, f in self.pair.members_in(chart_id) if lab in self.exceptional]

    # ------------------------------------------------------------------
    # fibers, truncations, restrictions
    # ------------------------------------------------------------------
    def fiber(self) -> "BasicObject":
        return replace(
            self, pair=self.pair.fiber(), ideals=tuple((cid, I.fiber()) for cid, I in self.ideals)
        )

    def truncate(self, m_new: int) -> "BasicObject":
        pair = SPair(
            tuple(replace(c, m=m_new, log=tuple(
                CoordinateChange(ch.var, ch.c.truncate(m_new), ch.h.truncate(m_new)) for ch in c.log
            )) for c in self.pair.charts),
            tuple(
                Hypersurface(h.label, tuple((cid, None if f is None else f.truncate(m_new)) for cid, f in h.equations))
                for h in self.pair.E
            ),
        )
        return replace(self, pair=pair, ideals=tuple((cid, I.truncate(m_new)) for cid, I in self.ideals))

    def restrict_charts(self, chart_ids: Iterable[str]) -> "BasicObject":
        keep = [cid for cid in self.chart_ids() if cid in set(chart_ids)]
        return replace(
            self, pair=self.pair.restrict_charts(keep), ideals=tuple((cid, self.ideal(cid)) for cid in keep)
        )

    def with_ideals(self, ideals: Mapping[str, Ideal], b: Optional[int] = None) -> "BasicObject":
        return replace(
            self, ideals=tuple((cid, ideals[cid]) for cid in self.chart_ids()), b=self.b if b is None else b
        )

    def apply_changes(self, chart_id: str, changes: Sequence[CoordinateChange]) -> "BasicObject":
        """Rewrite one chart (ideal, E-equations, chart log) through coordinate changes."""
        if not changes:
            return self
        pair = rewrite_members(self.pair, chart_id, changes)
        ideals = tuple(
            (cid, apply_changes(I, changes) if cid == chart_id else I) for cid, I in self.ideals
        )
        return replace(self, pair=pair, ideals=ideals)

    def same_as(self, other: "BasicObject") -> bool:
        if self.b != other.b or self.chart_ids() != other.chart_ids():
            return False
        return all(self.ideal(cid).equals(other.ideal(cid)) for cid in self.chart_ids())

    # ------------------------------------------------------------------
    # factorization through exceptional hypersurfaces
    # ------------------------------------------------------------------
    def exceptional_exponents(self, chart_id: str) -> Dict[str, int]:
        ideal = self.ideal(chart_id)
        return {lab: order_along_member(ideal, f) for lab, f in self.exceptional_members(chart_id)}

    def proper(self, chart_id: str) -> Ideal:
        """Proper transform Ī: I with the largest powers of exceptional members divided out."""
        ideal = self.ideal(chart_id)
        for lab, f in self.exceptional_members(chart_id):
            a = order_along_member(ideal, f)
            if a:
                ideal = divide_exceptional(ideal, f, a)
        return ideal

    def reconstruct(self, chart_id: str) -> bool:
        """Check I = Π I(H)^{a_H} · Ī as a two-sided membership."""
        ideal = self.ideal(chart_id)
        rebuilt = self.proper(chart_id)
        for lab, f in self.exceptional_members(chart_id):
            a = order_along_member(ideal, f)
            if a:
                rebuilt = rebuilt * Ideal(f.vars, f.m, (f,)).power(a)
        return rebuilt.equals(ideal)

    # ------------------------------------------------------------------
    # singular locus
    # ------------------------------------------------------------------
    def singular_ideal(self, chart_id: str, level: str = "fiber") -> Ideal:
        ideal = self.ideal(chart_id)
        if level == "fiber":
            ideal = ideal.fiber()
        return singular_ideal(ideal, self.b)

    def singular_locus(self, level: str = "fiber") -> Dict[str, VarietyDescription]:
        return {cid: variety(self.singular_ideal(cid, level)) for cid in self.chart_ids()}

    def sing_is_empty(self) -> bool:
        return all(v.empty for v in self.singular_locus().values())

    def is_good(self) -> bool:
        """Order of the fiber ideal equals b at every point of Sing."""
        for cid in self.chart_ids():
            fib = self.ideal(cid).fiber()
            if not (self.singular_ideal(cid) + delta_power(fib, self.b)).is_unit():
                return False
        return True

    # ------------------------------------------------------------------
    # permissibility
    # ------------------------------------------------------------------
    def is_permissible_center(self, center: CenterSpec, fast_path: bool = True) -> PermissibilityVerdict:
        verdicts = []
        good = fast_path and self.is_good()
        for cid in self.chart_ids():
            cc = center.get(cid)
            if cc is None:
                continue
            ideal = self.ideal(cid)
            nu = order_along_center(ideal, cc)
            nu0 = order_along_center(ideal, cc, level="fiber")
            in_sing = nu0 >= self.b
            quick = None
            if good:
                chart = self.chart(cid)
                c_ideal = apply_changes(singular_ideal(ideal, self.b), cc.changes)
                quick = cc.ideal(chart.vars, chart.m).contains_ideal(c_ideal)
                if quick != (in_sing and nu == nu0):
                    logger.warning(
                        "permissibility fast path disagrees on chart %s (fast=%s, nu=%d, nu0=%d)",
                        cid, quick, nu, nu0,
                    )
            verdicts.append(ChartVerdict(cid, nu, nu0, in_sing, quick))
        ok = bool(verdicts) and all(v.ok for v in verdicts)
        return PermissibilityVerdict(ok, tuple(verdicts))

    # ------------------------------------------------------------------
    # transforms
    # ------------------------------------------------------------------
    def fresh_label(self) -> str:
        taken = set(self.pair.labels())
        k = len(taken) + 1
        while f"H{k}" in taken:
            k += 1
        return f"H{k}"

    def transform(self, center: CenterSpec, label: Optional[str] = None, check: bool = True) -> "BasicObject":
        """
        Blow up along a permissible center and take the controlled transform I_1 = E^{-b} I'.

        Raises:
        - PermissibilityError: the center is not permissible (when check is set).
        - InvariantBreach: the controlled division fails.
        """
        return self.transform_with_record(center, label, check)[0]

    def transform_with_record(
        self, center: CenterSpec, label: Optional[str] = None, check: bool = True
    ) -> Tuple["BasicObject", BlowupRecord]:
        if check:
            verdict = self.is_permissible_center(center)
            if not verdict.ok:
                raise PermissibilityError(
                    "Center is not permissible: " + "; ".join(verdict.diagnostics()), clause="order"
                )
        label = label or self.fresh_label()
        pair, record = blowup(self.pair, center, label, self.step)
        return self._controlled(pair, record), record

    def _controlled(self, pair: SPair, record: BlowupRecord) -> "BasicObject":
        ideals = []
        for t in record.transitions:
            total = t.pull_back(self.ideal(t.parent))
            if t.exceptional is not None:
                try:
                    total = divide_exceptional(total, t.exceptional, self.b)
                except NotDivisible as exc:
                    raise InvariantBreach(
                        f"Controlled transform on chart {t.child} failed: {exc}"
                    ) from exc
            ideals.append((t.child, total))
        return BasicObject(pair, tuple(ideals), self.b, self.step + 1, self.exceptional + (record.label,))

    def total_transform(self, center: CenterSpec) -> Dict[str, Ideal]:
        _, record = blowup(self.pair, center, self.fresh_label(), self.step)
        return {t.child: t.pull_back(self.ideal(t.parent)) for t in record.transitions}

    def __str__(self) -> str:
        parts = [f"{cid}: {self.ideal(cid)}" for cid in self.chart_ids()]
        return f"B(b={self.b}, step={self.step}; " + "; ".join(parts) + ")"


def normalize_members(pair: SPair, ideal: Ideal, chart_id: str) -> Tuple[SPair, Ideal]:
    """
    Make every E-member a chart variable by coordinate changes that fix the members already
    normalized.

    Raises:
    - BadInput: when E is not in normal crossings (some member cannot be normalized).
    """
    protected: List[str] = []
    for h in pair.E:
        f = h.equation(chart_id)
        if f is None:
            continue
        v = coordinate_var(f)
        if v is not None and v not in protected:
            protected.append(v)
            continue
        try:
            cc = normalize_center(Ideal(f.vars, f.m, (f,)), protected, allow_divisor=False)
        except UnsupportedCenter as exc:
            raise BadInput(f"E-member {h.label} = V({f}) is not in normal crossings: {exc}") from exc
        if cc is None or len(cc.vars) != 1 or cc.vars[0] in protected:
            raise BadInput(f"E-member {h.label} = V({f}) is not a smooth hypersurface in normal crossings")
        pair = rewrite_members(pair, chart_id, cc.changes)
        ideal = apply_changes(ideal, cc.changes)
        protected.append(cc.vars[0])
    return pair, ideal


def proper_transform_exponent(obj: BasicObject, center: CenterSpec, chart_id: str) -> int:
    """Largest a with I'_1 ⊆ (w^a) on a chart created by the blow-up (w its exceptional equation)."""
    _, record = blowup(obj.pair, center, obj.fresh_label(), obj.step)
    t = record.transition(chart_id)
    if t.exceptional is None:
        raise BadInput(f"Chart {chart_id} carries no exceptional divisor")
    return order_along_member(t.pull_back(obj.ideal(t.parent)), t.exceptional)


@dataclass(frozen=True)
class IdTriple:
    pair: SPair
    ideals: Tuple[Tuple[str, Ideal], ...]

    @classmethod
    def create(cls, ideal: Ideal, E: Sequence[Tuple[str, object]] = ()) -> "IdTriple":
        obj = BasicObject.create(ideal, 1, E)
        return cls(obj.pair, obj.ideals)

    def as_basic_object(self, b: int = 1) -> BasicObject:
        return BasicObject(self.pair, self.ideals, b)


# ----------------------------------------------------------------------
# pre-equivalence probe
# ----------------------------------------------------------------------
@dataclass
class ProbeStep:
    sequence: int
    step: int
    center: str
    verdict: bool
    verdict_other: bool
    fiber_verdict: bool
    fiber_verdict_other: bool


@dataclass
class ProbeReport:
    steps: List[ProbeStep] = field(default_factory=list)

    @property
    def pre_equivalent(self) -> bool:
        return all(s.verdict == s.verdict_other for s in self.steps)

    @property
    def fibers_agree(self) -> bool:
        return all(s.fiber_verdict == s.fiber_verdict_other for s in self.steps)

    @property
    def w_equivalent(self) -> bool:
        return self.pre_equivalent and self.fibers_agree


def pre_equivalence_probe(
    obj: BasicObject, other: BasicObject, sequences: Sequence[Sequence[CenterSpec]]
) -> ProbeReport:
    """
    Compare permissibility verdicts of two objects on the same pair along candidate center
    sequences. A sequence stops at the first center that is not permissible for both objects.
    """
    report = ProbeReport()
    for i, sequence in enumerate(sequences):
        a, b = obj, other
        fa, fb = obj.fiber(), other.fiber()
        for j, center in enumerate(sequence):
            va = a.is_permissible_center(center).ok
            vb = b.is_permissible_center(center).ok
            fiber_center = center.fiber()
            fva = fa.is_permissible_center(fiber_center).ok
            fvb = fb.is_permissible_center(fiber_center).ok
            label = "; ".join(
                f"{cid}: {cc.describe(a.chart(cid).vars, a.m)}" for cid, cc in center.components if cc is not None
            )
            report.steps.append(ProbeStep(i, j, label, va, vb, fva, fvb))
            if not (va and vb):
                break
            a, b = a.transform(center, check=False), b.transform(center, check=False)
            fa, fb = fa.transform(fiber_center, check=False), fb.transform(fiber_center, check=False)
    return report
