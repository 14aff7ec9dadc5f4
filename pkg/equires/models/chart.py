# equires/models/chart.py

"""
Module: chart.py

Affine charts of a smooth ambient scheme over A, hypersurfaces with per-chart equations,
S-pairs (charts plus an ordered E-list), centers in coordinate form and chart-based
blow-ups.

Conventions:
- A CoordinateChange introduces the new coordinate v' = c·v + h (c a unit of A, h free of v).
  Resident ideals are rewritten through the inverse substitution v := c^-1 (v - h).
- Blowing up chart `c` along V(v_1..v_r), r ≥ 2, creates the charts `c.v_j`, where
  v_i := v_i·v_j for i ≠ j and the exceptional divisor is V(v_j).
- A codimension-one center leaves the chart unchanged; only E grows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from equires.exceptions import NotACoordinateChange, PermissibilityError, UnsupportedCenter
from equires.operations.ideal import Ideal
from equires.operations.poly import Poly
from equires.operations.scalar import ArtinScalar

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# coordinate changes
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class CoordinateChange:
    var: str
    c: ArtinScalar
    h: Poly

    def __post_init__(self):
        if not self.c.is_unit():
            raise NotACoordinateChange(f"Linear coefficient {self.c} of {self.var} is not a unit")
        if not self.h.free_of(self.var):
            raise NotACoordinateChange(f"Translation {self.h} depends on {self.var}")

    @property
    def m(self) -> int:
        return self.h.m

    def is_identity(self) -> bool:
        return self.h.is_zero() and self.c == ArtinScalar.one(self.c.m)

    def has_identity_fiber(self) -> bool:
        return self.c.fiber() == 1 and self.h.fiber().is_zero()

    def new_coordinate(self) -> Poly:
        """v' = c·v + h as a polynomial in the old coordinates."""
        return Poly.var(self.var, self.h.vars, self.m).scale(self.c) + self.h

    def apply(self, f: Poly) -> Poly:
        """Rewrite f (old coordinates) in the new coordinates."""
        v = Poly.var(self.var, f.vars, f.m)
        return f.substitute({self.var: (v - self.h.with_vars(f.vars)).scale(self.c.inverse())})

    def apply_ideal(self, ideal: Ideal) -> Ideal:
        return Ideal(ideal.vars, ideal.m, tuple(self.apply(g) for g in ideal.gens))

    def revert(self, f: Poly) -> Poly:
        """Rewrite f (new coordinates) back in the old coordinates."""
        v = Poly.var(self.var, f.vars, f.m)
        return f.substitute({self.var: v.scale(self.c) + self.h.with_vars(f.vars)})

    def revert_ideal(self, ideal: Ideal) -> Ideal:
        return Ideal(ideal.vars, ideal.m, tuple(self.revert(g) for g in ideal.gens))

    def fiber(self) -> "CoordinateChange":
        return CoordinateChange(self.var, self.c.truncate(1), self.h.fiber())

    def lift(self, m: int) -> "CoordinateChange":
        return CoordinateChange(self.var, ArtinScalar(self.c.coeffs, m), self.h.lift(m))

    def __str__(self) -> str:
        return f"{self.var}' = {self.new_coordinate()}"


def apply_changes(ideal: Ideal, changes: Iterable[CoordinateChange]) -> Ideal:
    for change in changes:
        ideal = change.apply_ideal(ideal)
    return ideal


def revert_changes(ideal: Ideal, changes: Sequence[CoordinateChange]) -> Ideal:
    for change in reversed(changes):
        ideal = change.revert_ideal(ideal)
    return ideal


# ----------------------------------------------------------------------
# charts, hypersurfaces, pairs
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Chart:
    id: str
    vars: Tuple[str, ...]
    m: int
    log: Tuple[CoordinateChange, ...] = ()
    parent: Optional[Tuple[str, int]] = None

    def with_changes(self, changes: Sequence[CoordinateChange]) -> "Chart":
        kept = tuple(c for c in changes if not c.is_identity())
        return replace(self, log=self.log + kept)

    def to_base(self, ideal: Ideal) -> Ideal:
        """Express an ideal of this chart in the coordinates the chart was created with."""
        return revert_changes(ideal, self.log)

    def fiber(self) -> "Chart":
        return replace(self, m=1, log=tuple(c.fiber() for c in self.log))


def apply_coordinate_change(chart: Chart, change: CoordinateChange) -> Chart:
    if tuple(change.h.vars) != chart.vars:
        raise NotACoordinateChange(f"Change {change} does not live on chart {chart.id}")
    return chart.with_changes([change])


def coordinate_var(f: Optional[Poly]) -> Optional[str]:
    """The variable v when f = u·v with u a unit constant, else None."""
    if f is None or len(f.terms) != 1:
        return None
    (exp, coeff), = f.terms
    if sum(exp) != 1 or not coeff.is_unit():
        return None
    return f.vars[exp.index(1)]


@dataclass(frozen=True)
class Hypersurface:
    label: str
    equations: Tuple[Tuple[str, Optional[Poly]], ...]

    def equation(self, chart_id: str) -> Optional[Poly]:
        return dict(self.equations).get(chart_id)

    def var_in(self, chart_id: str) -> Optional[str]:
        return coordinate_var(self.equation(chart_id))

    def present_in(self, chart_id: str) -> bool:
        return self.equation(chart_id) is not None

    def ideal_in(self, chart_id: str) -> Ideal:
        f = self.equation(chart_id)
        if f is None:
            raise UnsupportedCenter(f"{self.label} is absent in chart {chart_id}")
        return Ideal(f.vars, f.m, (f,))

    def fiber(self) -> "Hypersurface":
        return Hypersurface(
            self.label, tuple((cid, None if f is None else f.fiber()) for cid, f in self.equations)
        )


@dataclass(frozen=True)
class SPair:
    charts: Tuple[Chart, ...]
    E: Tuple[Hypersurface, ...] = ()

    @property
    def m(self) -> int:
        return self.charts[0].m

    @property
    def dim(self) -> int:
        return len(self.charts[0].vars)

    def chart_ids(self) -> List[str]:
        return [c.id for c in self.charts]

    def chart(self, chart_id: str) -> Chart:
        for c in self.charts:
            if c.id == chart_id:
                return c
        raise KeyError(chart_id)

    def labels(self) -> List[str]:
        return [h.label for h in self.E]

    def member(self, label: str) -> Hypersurface:
        for h in self.E:
            if h.label == label:
                return h
        raise KeyError(label)

    def members_in(self, chart_id: str) -> List[Tuple[str, Poly]]:
        out = []
        for h in self.E:
            f = h.equation(chart_id)
            if f is not None:
                out.append((h.label, f))
        return out

    def e_vars(self, chart_id: str) -> Dict[str, str]:
        """label -> chart variable for the coordinate E-members present in the chart."""
        out = {}
        for h in self.E:
            v = h.var_in(chart_id)
            if v is not None:
                out[h.label] = v
        return out

    def fiber(self) -> "SPair":
        return SPair(tuple(c.fiber() for c in self.charts), tuple(h.fiber() for h in self.E))

    def restrict_charts(self, chart_ids: Iterable[str]) -> "SPair":
        keep = set(chart_ids)
        charts = tuple(c for c in self.charts if c.id in keep)
        E = tuple(
            Hypersurface(h.label, tuple((cid, f) for cid, f in h.equations if cid in keep)) for h in self.E
        )
        return SPair(charts, E)


def rewrite_members(pair: SPair, chart_id: str, changes: Sequence[CoordinateChange]) -> SPair:
    """Apply coordinate changes on one chart to the chart log and every E-equation there."""
    if not changes:
        return pair
    charts = tuple(c.with_changes(changes) if c.id == chart_id else c for c in pair.charts)
    E = []
    for h in pair.E:
        eqs = []
        for cid, f in h.equations:
            if cid == chart_id and f is not None:
                g = f
                for change in changes:
                    g = change.apply(g)
                v = coordinate_var(g)
                f = Poly.var(v, g.vars, g.m) if v is not None else g
            eqs.append((cid, f))
        E.append(Hypersurface(h.label, tuple(eqs)))
    return SPair(charts, tuple(E))


def validate_pair(pair: SPair, allow_divisors: bool = False) -> List[str]:
    """Normal-crossings diagnostics; an empty list means the pair is valid."""
    problems: List[str] = []
    labels = pair.labels()
    for label in sorted({lab for lab in labels if labels.count(lab) > 1}):
        problems.append(f"duplicate label {label}")
    for chart in pair.charts:
        for change in chart.log:
            if not change.c.is_unit():
                problems.append(f"chart {chart.id}: non-unit linear part in {change}")
        seen: Dict[str, str] = {}
        members = pair.members_in(chart.id)
        for i, (label, f) in enumerate(members):
            for other_label, g in members[:i]:
                if Ideal(f.vars, f.m, (f,)).equals(Ideal(g.vars, g.m, (g,))):
                    problems.append(f"chart {chart.id}: {label} duplicates hypersurface {other_label}")
            v = coordinate_var(f)
            if v is None:
                if not allow_divisors:
                    problems.append(f"chart {chart.id}: {label} = V({f}) is not a coordinate hypersurface")
                elif not is_smooth_divisor(f):
                    problems.append(f"chart {chart.id}: {label} = V({f}) is not smooth")
                continue
            if v in seen and seen[v] != label:
                problems.append(f"chart {chart.id}: {label} duplicates hypersurface {seen[v]}")
            seen[v] = label
    return problems


def is_smooth_divisor(f: Poly) -> bool:
    """V(f) is a nonempty hypersurface whose fiber has order one at each of its points."""
    g = f.fiber()
    ideal = Ideal(g.vars, 1, (g,) + tuple(g.diff(v) for v in g.vars))
    return not Ideal(g.vars, 1, (g,)).is_unit() and ideal.is_unit()


# ----------------------------------------------------------------------
# centers
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ChartCenter:
    """After `changes`, the center is V(vars), or V(divisor) for a non-coordinate divisor."""

    changes: Tuple[CoordinateChange, ...] = ()
    vars: Tuple[str, ...] = ()
    divisor: Optional[Poly] = None

    @property
    def codim(self) -> int:
        return 1 if self.divisor is not None else len(self.vars)

    def ideal(self, chart_vars: Sequence[str], m: int) -> Ideal:
        """Center ideal in the coordinates after the changes."""
        if self.divisor is not None:
            return Ideal(tuple(chart_vars), m, (self.divisor,))
        return Ideal.of_vars(self.vars, chart_vars, m)

    def base_ideal(self, chart_vars: Sequence[str], m: int) -> Ideal:
        """Center ideal in the coordinates before the changes."""
        return revert_changes(self.ideal(chart_vars, m), self.changes)

    def has_identity_fiber(self) -> bool:
        return all(c.has_identity_fiber() for c in self.changes)

    def fiber(self) -> "ChartCenter":
        return ChartCenter(
            tuple(c.fiber() for c in self.changes),
            self.vars,
            None if self.divisor is None else self.divisor.fiber(),
        )

    def describe(self, chart_vars: Sequence[str], m: int) -> str:
        gens = self.base_ideal(chart_vars, m).gens
        return "V(" + ", ".join(str(g) for g in gens) + ")"


@dataclass(frozen=True)
class CenterSpec:
    components: Tuple[Tuple[str, Optional[ChartCenter]], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, Optional[ChartCenter]]) -> "CenterSpec":
        return cls(tuple(sorted(mapping.items())))

    def get(self, chart_id: str) -> Optional[ChartCenter]:
        return dict(self.components).get(chart_id)

    def present_charts(self) -> List[str]:
        return [cid for cid, cc in self.components if cc is not None]

    def is_empty(self) -> bool:
        return not self.present_charts()

    def fiber(self) -> "CenterSpec":
        return CenterSpec(tuple((cid, None if cc is None else cc.fiber()) for cid, cc in self.components))


def _linear_form(f: Poly, v: str) -> Optional[Tuple[ArtinScalar, Poly]]:
    """Split f = c·v + h with c a unit scalar and h free of v."""
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
    if c is None or not c.is_unit():
        return None
    return c, Poly.from_dict(f.vars, f.m, rest)


def _candidates(ideal: Ideal, chosen: Sequence[str]) -> List[Poly]:
    zero = {v: Poly.zero(ideal.vars, ideal.m) for v in chosen}
    pool = [g.substitute(zero) for g in ideal.basis()]
    for v in ideal.vars:
        if v in chosen:
            continue
        x = Poly.var(v, ideal.vars, ideal.m)
        pool.append((x - ideal.normal_form(x)).substitute(zero))
    pool = [g for g in pool if not g.is_zero()]
    return sorted(pool, key=lambda g: (len(g.terms), g.degree(), str(g)))


def normalize_center(
    ideal: Ideal,
    protected: Iterable[str] = (),
    allow_divisor: bool = True,
    require_fiber_identity: bool = False,
) -> Optional[ChartCenter]:
    """
    Find coordinate changes after which ideal = (v_1, ..., v_r).

    Variables in `protected` (coordinate E-members) may not be moved by a change; they can
    still be center variables. Returns None when the ideal is the unit ideal.

    Raises:
    - UnsupportedCenter: when no coordinate form (or smooth divisor form) is found.
    """
    if ideal.is_unit():
        return None
    protected = set(protected)
    changes: List[CoordinateChange] = []
    chosen: List[str] = []
    current = ideal
    while True:
        target = Ideal.of_vars(chosen, ideal.vars, ideal.m)
        if chosen and target.contains_ideal(current):
            if current.contains_ideal(target):
                return ChartCenter(tuple(changes), tuple(chosen))
            break
        pick = None
        for g in _candidates(current, chosen):
            for v in ideal.vars:
                if v in chosen:
                    continue
                split = _linear_form(g, v)
                if split is None:
                    continue
                c, h = split
                if not h.is_zero() and v in protected:
                    continue
                if require_fiber_identity and not h.is_zero():
                    norm = ArtinScalar.constant(1 / c.fiber(), c.m)
                    c, h = c * norm, h.scale(norm)
                    if not h.fiber().is_zero():
                        continue
                pick = (v, c, h)
                break
            if pick is not None:
                break
        if pick is None:
            break
        v, c, h = pick
        if not h.is_zero():
            change = CoordinateChange(v, c, h)
            changes.append(change)
            current = change.apply_ideal(current)
            logger.debug("center normalization: %s", change)
        chosen.append(v)

    basis = ideal.basis()
    if allow_divisor and not changes and len(basis) == 1 and is_smooth_divisor(basis[0]):
        return ChartCenter(divisor=basis[0])
    raise UnsupportedCenter(f"{ideal} is not a coordinate center in normal crossings with E")


# ----------------------------------------------------------------------
# blow-ups
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ChartTransition:
    """How an ideal of the parent chart becomes an ideal of the child chart (total transform)."""

    parent: str
    child: str
    changes: Tuple[CoordinateChange, ...] = ()
    substitution: Tuple[Tuple[str, Poly], ...] = ()
    exceptional: Optional[Poly] = None

    def pull_back(self, ideal: Ideal) -> Ideal:
        ideal = apply_changes(ideal, self.changes)
        if self.substitution:
            ideal = ideal.substitute(dict(self.substitution))
        return ideal


@dataclass(frozen=True)
class BlowupRecord:
    label: str
    center: CenterSpec
    transitions: Tuple[ChartTransition, ...]

    def children_of(self, chart_id: str) -> List[ChartTransition]:
        return [t for t in self.transitions if t.parent == chart_id]

    def transition(self, child: str) -> ChartTransition:
        for t in self.transitions:
            if t.child == child:
                return t
        raise KeyError(child)


def _strict_transform(f: Poly, substitution: Mapping[str, Poly], w: str) -> Optional[Poly]:
    g = f.substitute(substitution)
    g = g.divide_by_var_power(w, g.min_power(w))
    if g.is_unit():
        return None
    v = coordinate_var(g)
    return Poly.var(v, g.vars, g.m) if v is not None else g


def blowup(pair: SPair, center: CenterSpec, label: str, step: int = 0) -> Tuple[SPair, BlowupRecord]:
    """
    Blow up the pair along the center; the exceptional hypersurface gets `label`.

    Raises:
    - PermissibilityError: the center is not in normal crossings with E.
    """
    charts: List[Chart] = []
    transitions: List[ChartTransition] = []
    equations: Dict[str, List[Tuple[str, Optional[Poly]]]] = {h.label: [] for h in pair.E}
    new_member: List[Tuple[str, Optional[Poly]]] = []

    for chart in pair.charts:
        cc = center.get(chart.id)
        if cc is None:
            charts.append(chart)
            transitions.append(ChartTransition(chart.id, chart.id))
            for h in pair.E:
                equations[h.label].append((chart.id, h.equation(chart.id)))
            new_member.append((chart.id, None))
            continue

        local = rewrite_members(pair.restrict_charts([chart.id]), chart.id, cc.changes)
        base = local.chart(chart.id)
        center_ideal = cc.ideal(chart.vars, chart.m)
        for h in local.E:
            f = h.equation(chart.id)
            if f is None or coordinate_var(f) is not None:
                continue
            if center_ideal.contains(f) and cc.codim > 1:
                raise PermissibilityError(
                    f"Center contained in the non-coordinate member {h.label} on chart {chart.id}",
                    clause="normal-crossings",
                )

        if cc.codim == 1:
            exc = cc.divisor if cc.divisor is not None else Poly.var(cc.vars[0], chart.vars, chart.m)
            logger.warning("codimension-one center V(%s) on chart %s: blow-up is the identity", exc, chart.id)
            charts.append(base)
            transitions.append(ChartTransition(chart.id, chart.id, cc.changes, (), exc))
            exc_ideal = Ideal(chart.vars, chart.m, (exc,))
            for h in local.E:
                f = h.equation(chart.id)
                if f is not None and Ideal(chart.vars, chart.m, (f,)).equals(exc_ideal):
                    f = None
                equations[h.label].append((chart.id, f))
            new_member.append((chart.id, exc))
            continue

        for vj in cc.vars:
            child = f"{chart.id}.{vj}"
            xj = Poly.var(vj, chart.vars, chart.m)
            substitution = {vi: Poly.var(vi, chart.vars, chart.m) * xj for vi in cc.vars if vi != vj}
            charts.append(Chart(child, chart.vars, chart.m, (), (chart.id, step)))
            transitions.append(
                ChartTransition(chart.id, child, cc.changes, tuple(sorted(substitution.items())), xj)
            )
            for h in local.E:
                f = h.equation(chart.id)
                equations[h.label].append((child, None if f is None else _strict_transform(f, substitution, vj)))
            new_member.append((child, xj))
        logger.info("blow-up of chart %s along V(%s): %d charts", chart.id, ", ".join(cc.vars), len(cc.vars))

    E = tuple(Hypersurface(h.label, tuple(equations[h.label])) for h in pair.E)
    E = E + (Hypersurface(label, tuple(new_member)),)
    record = BlowupRecord(label, center, tuple(transitions))
    return SPair(tuple(charts), E), record


__all__ = [
    "BlowupRecord",
    "CenterSpec",
    "Chart",
    "ChartCenter",
    "ChartTransition",
    "CoordinateChange",
    "Hypersurface",
    "SPair",
    "apply_changes",
    "apply_coordinate_change",
    "blowup",
    "coordinate_var",
    "is_smooth_divisor",
    "normalize_center",
    "revert_changes",
    "rewrite_members",
    "validate_pair",
]
