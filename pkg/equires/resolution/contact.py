# equires/resolution/contact.py

"""
Module: contact.py

Hypersurfaces of maximal contact and the inductive object.

An adapted hypersurface Z = V(f) on a chart has f in Δ^{b-1}(I) and f = c·v + h with c a unit
constant and h free of v, so one coordinate change turns Z into the coordinate hyperplane
V(v). The inductive object lives on Z with the coefficient ideal of (by default) the
homogenized ideal and index b!.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from equires.exceptions import A3Breach, InvariantBreach, UnsupportedCenter
from equires.models.basic_object import BasicObject, PermissibilityVerdict
from equires.models.chart import (
    CenterSpec,
    Chart,
    ChartCenter,
    ChartTransition,
    CoordinateChange,
    Hypersurface,
    SPair,
    apply_changes,
    coordinate_var,
    normalize_center,
)
from equires.operations.delta import delta_power, singular_ideal
from equires.operations.ideal import Ideal
from equires.operations.poly import Poly
from equires.resolution.invariants import coefficient_ideal, homogenized

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdaptedHypersurface:
    chart: str
    equation: Poly
    var: str
    change: Optional[CoordinateChange]
    a1: bool
    a2: bool
    a3: bool

    @property
    def inductive(self) -> bool:
        return self.a1 and self.a2 and self.a3

    @property
    def changes(self) -> Tuple[CoordinateChange, ...]:
        return () if self.change is None else (self.change,)

    def fiber(self) -> "AdaptedHypersurface":
        return replace(
            self,
            equation=self.equation.fiber(),
            change=None if self.change is None else self.change.fiber(),
        )

    def __str__(self) -> str:
        return f"V({self.equation})"


def split_linear(f: Poly, v: str) -> Optional[Tuple[object, Poly]]:
    i = f.vars.index(v)
    c = None
    rest = {}
    for exp, coeff in f.terms:
        if exp[i] == 0:
            rest[exp] = coeff
        elif exp[i] == 1 and sum(exp) == 1:
            c = coeff
        else:
            return None
    if c is None or not c.is_unit() or not c.is_constant():
        return None
    return c, Poly.from_dict(f.vars, f.m, rest)


def _transversal(obj: BasicObject, chart_id: str, z: str, change: Optional[CoordinateChange]) -> bool:
    """Z = V(z) after the change is distinct from, and transversal to, every E-member."""
    for label, f in obj.pair.members_in(chart_id):
        g = f if change is None else change.apply(f)
        v = coordinate_var(g)
        if v is not None:
            if v == z:
                return False
            continue
        restricted = g.restrict(z)
        if restricted.is_zero() or restricted.is_unit():
            continue
        grads = Ideal(restricted.vars, 1, (restricted.fiber(),) + tuple(restricted.fiber().diff(u) for u in restricted.vars))
        if not grads.is_unit():
            return False
    return True


def _a3(obj: BasicObject, chart_id: str, z: str, change: Optional[CoordinateChange]) -> bool:
    """Δ^{b-1}(I⁰) does not vanish identically on Z."""
    top = obj.singular_ideal(chart_id, level="fiber")
    if change is not None:
        top = change.fiber().apply_ideal(top)
    return not top.restrict(z).is_zero()


def _candidates(top: Ideal) -> List[Poly]:
    basis = top.basis()
    pool = list(basis)
    for i, g in enumerate(basis):
        for h in basis[i + 1:]:
            pool.extend([g + h, g - h])
    seen, out = set(), []
    for g in sorted(pool, key=lambda p: (len(p.terms), p.degree(), str(p))):
        if not g.is_zero() and g not in seen:
            seen.add(g)
            out.append(g)
    return out


def find_adapted_hypersurfaces(
    obj: BasicObject, chart_id: str, scale_only: Iterable[str] = (), inductive_only: bool = True
) -> List[AdaptedHypersurface]:
    """
    All adapted hypersurfaces found by the bounded search on one chart, best first.

    scale_only: variables of members that Z may coincide with but never move (members of E⁻
    of the ambient sequence); variables of other E-members are never used.
    """
    top = singular_ideal(obj.ideal(chart_id), obj.b)
    e_vars = set(obj.pair.e_vars(chart_id).values())
    scale_only = set(scale_only)
    found: List[AdaptedHypersurface] = []
    seen_vars = set()
    for f in _candidates(top):
        for v in obj.chart(chart_id).vars:
            split = split_linear(f, v)
            if split is None:
                continue
            c, h = split
            if v in e_vars:
                continue
            if v in scale_only and not h.is_zero():
                continue
            change = None if h.is_zero() else CoordinateChange(v, c, h)
            a1 = top.contains(f)
            a2 = _transversal(obj, chart_id, v, change)
            a3 = _a3(obj, chart_id, v, change)
            hyp = AdaptedHypersurface(chart_id, f, v, change, a1, a2, a3)
            if inductive_only and not hyp.inductive:
                continue
            key = (v, str(f))
            if key in seen_vars:
                continue
            seen_vars.add(key)
            found.append(hyp)
    return found


def find_adapted_hypersurface(
    obj: BasicObject, chart_id: str, scale_only: Iterable[str] = (), inductive_only: bool = True
) -> Optional[AdaptedHypersurface]:
    found = find_adapted_hypersurfaces(obj, chart_id, scale_only, inductive_only)
    if found:
        logger.debug("adapted hypersurface on %s: %s", chart_id, found[0])
        return found[0]
    return None


def check_adapted(obj: BasicObject, chart_id: str, f: Poly, v: str) -> AdaptedHypersurface:
    """Evaluate A1/A2/A3 for a given hypersurface V(f), f = c·v + h."""
    split = split_linear(f, v)
    if split is None:
        raise UnsupportedCenter(f"V({f}) is not a coordinate hypersurface in {v}")
    c, h = split
    change = None if h.is_zero() else CoordinateChange(v, c, h)
    top = singular_ideal(obj.ideal(chart_id), obj.b)
    return AdaptedHypersurface(
        chart_id, f, v, change, top.contains(f), _transversal(obj, chart_id, v, change), _a3(obj, chart_id, v, change)
    )


# ----------------------------------------------------------------------
# inductive object
# ----------------------------------------------------------------------
def inductive_object(
    obj: BasicObject, contacts: Mapping[str, AdaptedHypersurface], use_homogenized: bool = True
) -> BasicObject:
    """
    B_Z = (Z, C(J)|_Z, b!, E ∩ Z) on the charts of `contacts`, J = H(I, b) or I.

    The chart ids of the result are those of obj; variables lose the Z-variable.

    Raises:
    - A3Breach: the restricted ideal has zero fiber on some chart.
    """
    charts, ideals = [], []
    members: Dict[str, List[Tuple[str, Optional[Poly]]]] = {h.label: [] for h in obj.pair.E}
    index = None
    for cid, hyp in contacts.items():
        moved = obj.apply_changes(cid, hyp.changes)
        ideal = moved.ideal(cid)
        if use_homogenized:
            ideal = homogenized(ideal, obj.b)
        restricted, index = coefficient_ideal(ideal, obj.b, hyp.var)
        if restricted.fiber().is_zero():
            raise A3Breach(f"Coefficient ideal vanishes on Z = {hyp} in chart {cid}")
        chart = moved.chart(cid)
        rest = tuple(v for v in chart.vars if v != hyp.var)
        charts.append(Chart(cid, rest, chart.m))
        ideals.append((cid, restricted))
        for h in moved.pair.E:
            f = h.equation(cid)
            g = None if f is None else f.restrict(hyp.var)
            if g is not None and (g.is_zero() or g.is_unit()):
                g = None
            if g is not None:
                v = coordinate_var(g)
                g = Poly.var(v, g.vars, g.m) if v is not None else g
            members[h.label].append((cid, g))
    if not charts:
        raise UnsupportedCenter("No chart carries an adapted hypersurface")
    E = tuple(Hypersurface(h.label, tuple(members[h.label])) for h in obj.pair.E)
    exceptional = tuple(lab for lab in obj.exceptional if lab in {h.label for h in E})
    return BasicObject(SPair(tuple(charts), E), tuple(ideals), index, obj.step, exceptional)


def lift_center(lower: ChartCenter, hyp: AdaptedHypersurface, chart_vars: Sequence[str]) -> ChartCenter:
    """The center V(z, lower) of the ambient chart, in the coordinates before Z's change."""
    lifted = tuple(CoordinateChange(c.var, c.c, c.h.with_vars(chart_vars)) for c in lower.changes)
    if lower.divisor is not None:
        z = Poly.var(hyp.var, chart_vars, lower.divisor.m)
        ideal = Ideal(tuple(chart_vars), z.m, (z, lower.divisor.with_vars(chart_vars)))
        cc = normalize_center(apply_changes(ideal, lifted), ())
        return ChartCenter(hyp.changes + lifted + cc.changes, cc.vars)
    return ChartCenter(hyp.changes + lifted, (hyp.var,) + tuple(lower.vars))


def lift_center_spec(lower: CenterSpec, contacts: Mapping[str, AdaptedHypersurface], obj: BasicObject) -> CenterSpec:
    components = {}
    for cid in obj.chart_ids():
        cc = lower.get(cid)
        hyp = contacts.get(cid)
        components[cid] = None if cc is None or hyp is None else lift_center(cc, hyp, obj.chart(cid).vars)
    return CenterSpec.of(components)


def restrict_center(cc: ChartCenter, hyp: AdaptedHypersurface, chart_vars: Sequence[str]) -> ChartCenter:
    """
    The center as a center of Z: requires cc to contain Z's change and the Z-variable.

    Raises:
    - UnsupportedCenter: when the center is not given inside Z.
    """
    if cc.changes[: len(hyp.changes)] != hyp.changes or hyp.var not in cc.vars:
        raise UnsupportedCenter("Center is not presented inside the hypersurface")
    rest = tuple(v for v in chart_vars if v != hyp.var)
    lowered = []
    for c in cc.changes[len(hyp.changes):]:
        if not c.h.free_of(hyp.var):
            raise UnsupportedCenter("Center change depends on the hypersurface variable")
        lowered.append(CoordinateChange(c.var, c.c, c.h.restrict(hyp.var)))
    return ChartCenter(tuple(lowered), tuple(v for v in cc.vars if v != hyp.var))


@dataclass(frozen=True)
class StrongVerdict:
    ok: bool
    lower: PermissibilityVerdict
    upper: PermissibilityVerdict


def is_strongly_permissible(
    obj: BasicObject, lower_obj: BasicObject, contacts: Mapping[str, AdaptedHypersurface], lower_center: CenterSpec
) -> StrongVerdict:
    """Permissible for the inductive object and, lifted, for obj itself."""
    lower = lower_obj.is_permissible_center(lower_center)
    upper = obj.is_permissible_center(lift_center_spec(lower_center, contacts, obj))
    return StrongVerdict(lower.ok and upper.ok, lower, upper)


# ----------------------------------------------------------------------
# transforms of Z
# ----------------------------------------------------------------------
def strict_transform_adapted(
    hyp: AdaptedHypersurface, transition: ChartTransition, transformed: BasicObject
) -> Optional[AdaptedHypersurface]:
    """
    Strict transform of Z through one chart transition, re-checked against the transformed
    object. Returns None when Z does not meet the new chart.

    Raises:
    - InvariantBreach: the strict transform is not in Δ^{b-1} of the transformed ideal.
    """
    f = transition.pull_back(Ideal(hyp.equation.vars, hyp.equation.m, (hyp.equation,))).gens[0]
    if transition.exceptional is not None:
        w = coordinate_var(transition.exceptional)
        if w is not None:
            f = f.divide_by_var_power(w, f.min_power(w))
    if f.is_unit():
        return None
    top = singular_ideal(transformed.ideal(transition.child), transformed.b)
    if not top.contains(f):
        raise InvariantBreach(f"Strict transform V({f}) left Δ^(b-1) on chart {transition.child}")
    for v in transformed.chart(transition.child).vars:
        split = split_linear(f, v)
        if split is not None:
            return check_adapted(transformed, transition.child, f, v)
    return AdaptedHypersurface(transition.child, f, hyp.var, None, True, False, False)


def check_derivative_transforms(obj: BasicObject, center: CenterSpec, transformed: BasicObject, record) -> List[str]:
    """
    Along a permissible blow-up with exceptional w and 1 ≤ i ≤ b:
    Δ^{b-i}(I)·O ⊆ (w^i) and w^{-i}·Δ^{b-i}(I)·O ⊆ Δ^{b-i}(I_1).
    """
    problems = []
    for t in record.transitions:
        if t.exceptional is None:
            continue
        w = coordinate_var(t.exceptional)
        if w is None:
            continue
        for i in range(1, obj.b + 1):
            pulled = t.pull_back(delta_power(obj.ideal(t.parent), obj.b - i))
            if pulled.order_along([w]) < i:
                problems.append(f"{t.child}: Δ^{obj.b - i}(I) pulled back is not in (w^{i})")
                continue
            divided = pulled.divide_by_var_power(w, i)
            if not delta_power(transformed.ideal(t.child), obj.b - i).contains_ideal(divided):
                problems.append(f"{t.child}: w^-{i}·Δ^{obj.b - i}(I) is not in Δ^{obj.b - i}(I_1)")
    return problems
