# equires/resolution/driver.py

"""
Module: driver.py

The resolution algorithm on the fiber (over Q), recursive on the dimension.

Every stage of the sequence is one of four kinds:
- monomial: max ω = 0, the center is the canonical center of Γ.
- t-codim1: Max(t) has a codimension-one part, which is the center.
- t-inductive: an inductive block starts. B″ is homogenized and restricted to an adapted
  hypersurface Z; the lower object is resolved to the end and its first center, lifted to the
  ambient chart, is the center.
- carryover: max t did not drop, the block goes on with the next center of the lower sequence.

Classes:
- StepRecord: one stage (kind, invariants, center, lower data).
- ResolutionTree: the whole sequence with its structural checks.
- Resolver: runs the loop.

Functions:
- resolve_fiber(B) -> ResolutionTree
- well_definedness_probe(B) -> List[WellDefinednessReport]

Usage:
>>> tree = resolve_fiber(BasicObject.create(parse_ideal(["y^2", "x^3"], ("x", "y"), 1), 2))
>>> tree.ell
1
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from equires.config import settings
from equires.exceptions import A3Breach, AlgorithmStuck, BadInput, UnsupportedCenter
from equires.models.basic_object import BasicObject
from equires.models.chart import BlowupRecord, CenterSpec, ChartCenter, normalize_center
from equires.operations.ideal import Ideal
from equires.operations.poly import Poly
from equires.resolution.contact import (
    AdaptedHypersurface,
    find_adapted_hypersurface,
    find_adapted_hypersurfaces,
    inductive_object,
    lift_center,
)
from equires.resolution.invariants import (
    GammaValue,
    Profile,
    b_doubleprime,
    check_sigma_identity,
    gamma,
    is_amenable,
    next_e_minus,
    profile,
    sigma,
)

logger = logging.getLogger(__name__)

MONOMIAL = "monomial"
T_CODIM1 = "t-codim1"
T_INDUCTIVE = "t-inductive"
CARRYOVER = "carryover"

INFINITY = float("inf")


def center_strings(obj: BasicObject, center: CenterSpec) -> Dict[str, str]:
    """Center components in the coordinates of their charts, e.g. {"c0": "V(x, y)"}."""
    return {
        cid: cc.describe(obj.chart(cid).vars, obj.m)
        for cid, cc in center.components
        if cc is not None
    }


def same_center(obj: BasicObject, first: CenterSpec, second: CenterSpec, level: str = "fiber") -> bool:
    """Equal charts and equal center ideals (before the changes) on each chart."""
    if first.present_charts() != second.present_charts():
        return False
    m = obj.m
    if level == "fiber":
        first, second, m = first.fiber(), second.fiber(), 1
    for cid in first.present_charts():
        chart = obj.chart(cid)
        a = first.get(cid).base_ideal(chart.vars, m)
        b = second.get(cid).base_ideal(chart.vars, m)
        if not a.equals(b):
            return False
    return True


# ----------------------------------------------------------------------
# records
# ----------------------------------------------------------------------
@dataclass
class StepRecord:
    j: int
    kind: str
    kmax: int
    max_omega: Fraction
    max_t: Tuple[Fraction, int]
    e_minus: Tuple[str, ...]
    pieces: Dict[str, Tuple[str, ...]]
    center: CenterSpec
    label: str
    invariant: Tuple
    gamma: Optional[GammaValue] = None
    contacts: Dict[str, AdaptedHypersurface] = field(default_factory=dict)
    lower: Optional["ResolutionTree"] = None
    block_index: int = 0
    sigma: Dict[str, Fraction] = field(default_factory=dict)
    centers: Dict[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        where = "; ".join(f"{cid}: {text}" for cid, text in self.centers.items())
        return f"step {self.j} [{self.kind}] max t={self.max_t}: {where}"


@dataclass
class ResolutionTree:
    objects: List[BasicObject]
    steps: List[StepRecord] = field(default_factory=list)
    records: List[BlowupRecord] = field(default_factory=list)
    depth: int = 0
    sigma_problems: List[str] = field(default_factory=list)

    @property
    def ell(self) -> int:
        return len(self.steps)

    @property
    def terminal(self) -> bool:
        return self.objects[-1].sing_is_empty()

    def max_t_non_increasing(self) -> bool:
        values = [(s.max_omega, s.max_t[1]) for s in self.steps]
        return all(a >= b for a, b in zip(values, values[1:]))

    def is_decreasing(self) -> bool:
        """The composite invariant drops strictly at every blow-up."""
        values = [s.invariant for s in self.steps]
        return all(a > b for a, b in zip(values, values[1:]))

    def is_rho_permissible(self) -> bool:
        """A t-permissible prefix followed only by monomial canonical-center steps."""
        seen_monomial = False
        for s in self.steps:
            if s.kind == MONOMIAL:
                seen_monomial = True
            elif seen_monomial:
                return False
        return True

    def centers(self, upto: Optional[int] = None) -> List[CenterSpec]:
        steps = self.steps if upto is None else self.steps[:upto]
        return [s.center for s in steps]

    def trace(self) -> List[str]:
        return [s.describe() for s in self.steps]


# ----------------------------------------------------------------------
# inductive blocks
# ----------------------------------------------------------------------
@dataclass
class InductiveBlock:
    """
    A lower sequence together with its chart correspondence: chart_map sends lower chart ids to
    ambient chart ids, contacts holds Z on every ambient chart of the block.
    """

    max_t: Tuple[Fraction, int]
    centers: List[CenterSpec]
    contacts: Dict[str, AdaptedHypersurface]
    chart_map: Dict[str, str]
    index: int = 0

    @classmethod
    def start(cls, max_t, centers: Sequence[CenterSpec], contacts: Mapping[str, AdaptedHypersurface]):
        return cls(max_t, list(centers), dict(contacts), {cid: cid for cid in contacts})

    def exhausted(self) -> bool:
        return self.index >= len(self.centers)

    def covers(self, chart_ids) -> bool:
        return set(chart_ids) <= set(self.chart_map.values())

    def lower_center(self) -> CenterSpec:
        return self.centers[self.index]

    def lift(self, obj: BasicObject, lower_center: Optional[CenterSpec] = None) -> CenterSpec:
        lower_center = self.lower_center() if lower_center is None else lower_center
        components: Dict[str, Optional[ChartCenter]] = {cid: None for cid in obj.chart_ids()}
        for lc, cc in lower_center.components:
            if cc is None:
                continue
            if cc.divisor is not None:
                raise AlgorithmStuck(f"Divisor center V({cc.divisor}) of the inductive object cannot be lifted")
            uc = self.chart_map[lc]
            components[uc] = lift_center(cc, self.contacts[uc], obj.chart(uc).vars)
        return CenterSpec.of(components)

    def advance(self, transformed: BasicObject) -> None:
        lower_center = self.lower_center()
        chart_map, contacts = {}, {}
        for lc, uc in self.chart_map.items():
            cc = lower_center.get(lc)
            hyp = self.contacts[uc]
            if cc is None:
                chart_map[lc] = uc
                contacts[uc] = hyp
                continue
            if len(cc.vars) == 1:
                pairs = [(lc, f"{uc}.{cc.vars[0]}")]
            else:
                pairs = [(f"{lc}.{v}", f"{uc}.{v}") for v in cc.vars]
            for lower_id, upper_id in pairs:
                chart_map[lower_id] = upper_id
                z = Poly.var(hyp.var, transformed.chart(upper_id).vars, transformed.m)
                contacts[upper_id] = AdaptedHypersurface(upper_id, z, hyp.var, None, True, True, True)
        self.chart_map, self.contacts = chart_map, contacts
        self.index += 1


def single_pieces(prof: Profile) -> Dict[str, Tuple[str, ...]]:
    """
    The Max(t)-piece of every chart attaining max t.

    Raises:
    - AlgorithmStuck: when a chart carries several pieces.
    """
    pieces = {}
    for cid in prof.top_charts():
        piece = is_amenable(prof, cid)
        if piece is None:
            raise AlgorithmStuck(f"Max(t) splits into {len(prof.charts[cid].pieces)} pieces on chart {cid}")
        pieces[cid] = piece
    return pieces


def scale_only_vars(obj: BasicObject, chart_id: str, e_minus: Sequence[str]) -> List[str]:
    names = []
    for lab in e_minus:
        v = obj.pair.member(lab).var_in(chart_id)
        if v is not None:
            names.append(v)
    return names


# ----------------------------------------------------------------------
# resolver
# ----------------------------------------------------------------------
class Resolver:
    """Runs the algorithm on a fiber object; lower dimensions get a Resolver of their own."""

    def __init__(self, obj: BasicObject, depth: int = 0):
        if obj.dim > settings.MAX_DIM:
            raise BadInput(f"Dimension {obj.dim} exceeds the guard {settings.MAX_DIM}")
        if depth > settings.MAX_DIM:
            raise AlgorithmStuck(f"Recursion depth {depth} exhausted")
        self.obj = obj if obj.m == 1 else obj.fiber()
        self.depth = depth
        self.e_minus: Tuple[str, ...] = ()
        self.previous_max: Optional[Fraction] = None
        self.block: Optional[InductiveBlock] = None
        self.births: Dict[str, Dict[str, Fraction]] = {}
        self.tree = ResolutionTree([self.obj], depth=depth)

    def run(self) -> ResolutionTree:
        while not self.obj.sing_is_empty():
            if self.tree.ell >= settings.MAX_STEPS:
                raise AlgorithmStuck(f"Step guard {settings.MAX_STEPS} reached", trace=self.tree.trace())
            self.step()
        logger.info("fiber resolution at depth %d finished after %d steps", self.depth, self.tree.ell)
        return self.tree

    def stage(self) -> Tuple[Profile, Tuple[str, ...]]:
        current = profile(self.obj).max_omega
        e_minus = next_e_minus(self.previous_max, current, self.e_minus, self.obj.pair.labels())
        return profile(self.obj, e_minus), e_minus

    def codim_one_center(self, prof: Profile) -> Optional[CenterSpec]:
        obj = self.obj
        components: Dict[str, Optional[ChartCenter]] = {cid: None for cid in obj.chart_ids()}
        found = False
        for cid in prof.top_charts():
            g = prof.charts[cid].max_t(obj.pair).fiber_gcd()
            if g.is_constant():
                continue
            protected = obj.pair.e_vars(cid).values()
            try:
                components[cid] = normalize_center(Ideal(g.vars, g.m, (g,)), protected)
            except UnsupportedCenter as exc:
                raise AlgorithmStuck(f"Codimension-one part of Max(t) on {cid}: {exc}", self.tree.trace()) from exc
            found = True
        return CenterSpec.of(components) if found else None

    def start_block(self, prof: Profile, e_minus: Sequence[str], pieces: Mapping[str, Tuple[str, ...]]):
        obj = self.obj
        b2 = b_doubleprime(obj, prof.kmax, e_minus, pieces).restrict_charts(list(pieces))
        contacts = {}
        for cid in pieces:
            hyp = find_adapted_hypersurface(b2, cid, scale_only_vars(obj, cid, e_minus))
            if hyp is None:
                raise AlgorithmStuck(f"No adapted hypersurface on chart {cid}", self.tree.trace())
            contacts[cid] = hyp
        try:
            lower_obj = inductive_object(b2, contacts)
        except (A3Breach, UnsupportedCenter) as exc:
            raise AlgorithmStuck(str(exc), self.tree.trace()) from exc
        lower = Resolver(lower_obj, self.depth + 1).run()
        if lower.ell == 0:
            raise AlgorithmStuck("Inductive object has an empty singular locus", self.tree.trace())
        return InductiveBlock.start(prof.max_t, lower.centers(), contacts), lower

    def step(self) -> StepRecord:
        obj = self.obj
        prof, e_minus = self.stage()
        j = self.tree.ell
        pieces: Dict[str, Tuple[str, ...]] = {}
        contacts: Dict[str, AdaptedHypersurface] = {}
        lower, value, block_index = None, None, 0
        if prof.kmax == 0:
            self.block = None
            result = gamma(obj)
            kind, center, value = MONOMIAL, result.center, result.value
            invariant = (0,) + result.value.as_tuple()
        else:
            pieces = single_pieces(prof)
            head = (1, prof.max_omega, prof.n_bar)
            if self.block is not None and self.block.max_t != prof.max_t:
                self.block = None
            if self.block is not None:
                if self.block.exhausted() or not self.block.covers(pieces):
                    raise AlgorithmStuck("Inductive block ended before max t dropped", self.tree.trace())
                kind = CARRYOVER
            else:
                center = self.codim_one_center(prof)
                if center is not None:
                    kind = T_CODIM1
                    invariant = head + (INFINITY,)
                else:
                    self.block, lower = self.start_block(prof, e_minus, pieces)
                    kind = T_INDUCTIVE
                    contacts = dict(self.block.contacts)
            if self.block is not None:
                block_index = self.block.index
                lower_tree = lower if lower is not None else self._lower_tree()
                center = self.block.lift(obj)
                invariant = head + lower_tree.steps[block_index].invariant

        verdict = obj.is_permissible_center(center)
        if not verdict.ok:
            raise AlgorithmStuck(
                f"Algorithmic center is not permissible at step {j}: " + "; ".join(verdict.diagnostics()),
                self.tree.trace(),
            )
        label = obj.fresh_label()
        record = StepRecord(
            j, kind, prof.kmax, prof.max_omega, prof.max_t, tuple(e_minus), pieces, center, label, invariant,
            value, contacts, lower, block_index, sigma(obj, center), center_strings(obj, center),
        )
        self.births[label] = record.sigma
        new, blowup_record = obj.transform_with_record(center, label, check=False)
        if kind in (T_INDUCTIVE, CARRYOVER):
            self.block.advance(new)
        logger.info("depth %d %s", self.depth, record.describe())

        self.tree.steps.append(record)
        self.tree.records.append(blowup_record)
        self.tree.objects.append(new)
        self.tree.sigma_problems.extend(check_sigma_identity(new, self.births))
        self.previous_max, self.e_minus, self.obj = prof.max_omega, tuple(e_minus), new
        return record

    def _lower_tree(self) -> ResolutionTree:
        for s in reversed(self.tree.steps):
            if s.kind == T_INDUCTIVE:
                return s.lower
        raise AlgorithmStuck("Carryover step without an inductive block")


def resolve_fiber(obj: BasicObject) -> ResolutionTree:
    """
    Resolve the fiber of obj over Q.

    Raises:
    - BadInput: dimension above the guard.
    - AlgorithmStuck: an implementation limit was hit (trace attached).
    """
    return Resolver(obj.fiber()).run()


# ----------------------------------------------------------------------
# well-definedness
# ----------------------------------------------------------------------
@dataclass
class WellDefinednessReport:
    chart: str
    hypersurfaces: List[str] = field(default_factory=list)
    centers: List[Ideal] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(c.equals(self.centers[0]) for c in self.centers[1:])

    def describe(self) -> List[str]:
        return [f"{z} -> {c}" for z, c in zip(self.hypersurfaces, self.centers)]


def well_definedness_probe(obj: BasicObject) -> List[WellDefinednessReport]:
    """
    On an object in the inductive case, run the lower resolution for every adapted hypersurface
    the search finds on each chart and collect the first lifted centers. Returns one report per
    chart; empty when the first stage is not inductive.
    """
    resolver = Resolver(obj.fiber())
    if resolver.obj.sing_is_empty():
        return []
    prof, e_minus = resolver.stage()
    if prof.kmax == 0:
        return []
    pieces = single_pieces(prof)
    if resolver.codim_one_center(prof) is not None:
        return []
    fib = resolver.obj
    b2 = b_doubleprime(fib, prof.kmax, e_minus, pieces).restrict_charts(list(pieces))
    defaults = {}
    for cid in pieces:
        hyp = find_adapted_hypersurface(b2, cid, scale_only_vars(fib, cid, e_minus))
        if hyp is None:
            raise AlgorithmStuck(f"No adapted hypersurface on chart {cid}")
        defaults[cid] = hyp
    reports = []
    for cid in pieces:
        report = WellDefinednessReport(cid)
        chart = fib.chart(cid)
        for hyp in find_adapted_hypersurfaces(b2, cid, scale_only_vars(fib, cid, e_minus)):
            contacts = dict(defaults)
            contacts[cid] = hyp
            try:
                lower = Resolver(inductive_object(b2, contacts), 1).run()
            except (A3Breach, AlgorithmStuck, UnsupportedCenter) as exc:
                logger.warning("well-definedness probe skips %s on %s: %s", hyp, cid, exc)
                continue
            block = InductiveBlock.start(prof.max_t, lower.centers(), contacts)
            cc = block.lift(fib).get(cid)
            if cc is None:
                continue
            report.hypersurfaces.append(str(hyp))
            report.centers.append(cc.base_ideal(chart.vars, chart.m))
        if not report.consistent:
            logger.warning("adapted hypersurfaces on %s give different centers: %s", cid, report.describe())
        reports.append(report)
    return reports
