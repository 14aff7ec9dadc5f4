# equires/resolution/invariants.py

"""
Module: invariants.py

Resolution invariants of a basic object along its sequence of transforms.

- ω(x) = ν_x(Ī⁰)/b on Sing(B), evaluated on the fiber proper transform. Its maximum and the
  locus Max(ω) are found through the Δ-ladder of Ī⁰ restricted to Sing, never by enumerating
  points.
- t(x) = (ω(x), n(x)), n(x) the number of members of E⁻ through x. E⁻ is carried by the
  caller (the labels of E at the first step where max ω reached its current value).
- B′ and B″ are the auxiliary objects of the positive-ω case.
- In the monomial case (Ī⁰ = 1), Γ and the canonical center.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from equires.config import settings
from equires.exceptions import GuardExceeded, NotMonomial, OutOfDomain
from equires.models.basic_object import BasicObject, order_along_center, order_along_member
from equires.models.chart import CenterSpec, ChartCenter, SPair, apply_changes, coordinate_var, normalize_center
from equires.operations.delta import delta_cache, delta_power
from equires.operations.ideal import Ideal

logger = logging.getLogger(__name__)


def member_ideal(f) -> Ideal:
    return Ideal(f.vars, f.m, (f,))


# ----------------------------------------------------------------------
# ω and t
# ----------------------------------------------------------------------
@dataclass
class ChartProfile:
    chart: str
    sing: Ideal
    empty: bool
    kmax: int = 0
    max_omega: Optional[Ideal] = None
    pieces: List[Tuple[str, ...]] = field(default_factory=list)
    n: int = 0

    def max_t(self, pair: SPair) -> Optional[Ideal]:
        """Max(t) on this chart when the chart attains the global maximum (single piece)."""
        if not self.pieces or self.max_omega is None:
            return None
        piece = self.pieces[0]
        ideal = self.max_omega
        for label in piece:
            ideal = ideal + member_ideal(pair.member(label).equation(self.chart).fiber())
        return ideal


@dataclass
class Profile:
    """max ω (= kmax/b), n̄ and the per-chart loci of one stage."""

    b: int
    kmax: int
    n_bar: int
    charts: Dict[str, ChartProfile]

    @property
    def empty(self) -> bool:
        return all(p.empty for p in self.charts.values())

    @property
    def max_omega(self) -> Fraction:
        return Fraction(self.kmax, self.b)

    @property
    def max_t(self) -> Tuple[Fraction, int]:
        return (self.max_omega, self.n_bar)

    def top_charts(self) -> List[str]:
        return [cid for cid, p in self.charts.items() if p.pieces]


def is_amenable(prof: Profile, chart_id: str) -> Optional[Tuple[str, ...]]:
    """
    The labels H*_1..H*_n cutting Max(t) out of Max(ω) on chart_id, or None when Max(t)
    splits into several pieces there (or the chart does not attain max t).
    """
    pieces = prof.charts[chart_id].pieces
    return pieces[0] if len(pieces) == 1 else None


def _kmax(sing: Ideal, proper: Ideal) -> int:
    """Largest k with Sing + Δ^{k-1}(Ī) not the unit ideal (0 when Ī does not vanish on Sing)."""
    ladder = delta_cache(proper)
    k = 0
    while not (sing + ladder.get(k)).is_unit():
        k += 1
    return k


def profile(obj: BasicObject, e_minus: Iterable[str] = ()) -> Profile:
    """
    Evaluate ω and t on the fiber of obj.

    e_minus: labels whose members count towards n (members absent from a chart are ignored).
    """
    fib = obj.fiber()
    e_minus = [lab for lab in fib.pair.labels() if lab in set(e_minus)]
    charts: Dict[str, ChartProfile] = {}
    for cid in fib.chart_ids():
        sing = fib.singular_ideal(cid)
        cp = ChartProfile(cid, sing, sing.is_unit())
        if not cp.empty:
            cp.kmax = _kmax(sing, fib.proper(cid))
        charts[cid] = cp
    live = [p for p in charts.values() if not p.empty]
    kmax = max((p.kmax for p in live), default=0)
    for p in live:
        if p.kmax != kmax:
            continue
        proper = fib.proper(p.chart)
        p.max_omega = p.sing if kmax == 0 else p.sing + delta_power(proper, kmax - 1)
        present = [lab for lab in e_minus if fib.pair.member(lab).present_in(p.chart)]
        for size in range(len(present), -1, -1):
            found = []
            for T in itertools.combinations(present, size):
                ideal = p.max_omega
                for lab in T:
                    ideal = ideal + member_ideal(fib.pair.member(lab).equation(p.chart))
                if not ideal.is_unit():
                    found.append(T)
            if found:
                p.n = size
                p.pieces = found
                break
    n_bar = max((p.n for p in live if p.kmax == kmax and p.pieces), default=0)
    for p in live:
        if p.n != n_bar or p.kmax != kmax:
            p.pieces = []
    result = Profile(obj.b, kmax, n_bar, charts)
    logger.debug("profile: max omega=%s, n=%d on %s", result.max_omega, n_bar, result.top_charts())
    return result


def _point_check(obj: BasicObject, chart_id: str, point: Mapping[str, Fraction]) -> BasicObject:
    fib = obj.fiber()
    if fib.ideal(chart_id).order_at_point(point) < obj.b:
        raise OutOfDomain(f"Point {dict(point)} of chart {chart_id} is not in Sing(B)")
    return fib


def omega_at(obj: BasicObject, chart_id: str, point: Mapping[str, Fraction]) -> Fraction:
    """
    ω(x) = ν_x(Ī⁰)/b at a rational point of Sing.

    Raises:
    - OutOfDomain: when x is not a point of Sing(B).
    """
    fib = _point_check(obj, chart_id, point)
    return Fraction(fib.proper(chart_id).order_at_point(point), obj.b)


def t_at(obj: BasicObject, chart_id: str, point: Mapping[str, Fraction], e_minus: Iterable[str]) -> Tuple[Fraction, int]:
    fib = _point_check(obj, chart_id, point)
    omega = Fraction(fib.proper(chart_id).order_at_point(point), obj.b)
    n = 0
    for lab in e_minus:
        f = fib.pair.member(lab).equation(chart_id)
        if f is not None and member_ideal(f).translate(point).order_along(f.vars) >= 1:
            n += 1
    return omega, n


def omega_of_center(obj: BasicObject, center: CenterSpec) -> Dict[str, Fraction]:
    """ω(C) = ν(Ī, C)/b per chart (full level)."""
    return {
        cid: Fraction(order_along_center(obj.proper(cid), cc), obj.b)
        for cid, cc in center.components
        if cc is not None
    }


def sigma(obj: BasicObject, center: CenterSpec) -> Dict[str, Fraction]:
    """σ(C) = ν(I, C)/b per chart (full level)."""
    return {
        cid: Fraction(order_along_center(obj.ideal(cid), cc), obj.b)
        for cid, cc in center.components
        if cc is not None
    }


def _contains_center(obj: BasicObject, chart_id: str, cc: ChartCenter, f) -> bool:
    chart = obj.chart(chart_id)
    moved = apply_changes(member_ideal(f), cc.changes)
    return cc.ideal(chart.vars, chart.m).contains_ideal(moved)


@dataclass(frozen=True)
class PermissibilityFlags:
    omega: bool
    t: bool


def check_omega_t_permissible(
    obj: BasicObject, center: CenterSpec, prof: Profile, e_minus: Iterable[str]
) -> PermissibilityFlags:
    """ν(Ī, C) = ν(Ī⁰, C⁰) = b_r on every component, and C inside exactly n̄ members of E⁻."""
    e_minus = list(e_minus)
    omega_ok, t_ok = True, True
    for cid, cc in center.components:
        if cc is None:
            continue
        nu = order_along_center(obj.proper(cid), cc)
        nu0 = order_along_center(obj.fiber().proper(cid), cc, level="fiber")
        if not (nu == nu0 == prof.kmax):
            omega_ok = False
        through = [
            lab for lab in e_minus
            if obj.pair.member(lab).present_in(cid)
            and _contains_center(obj, cid, cc, obj.pair.member(lab).equation(cid))
        ]
        if len(through) != prof.n_bar:
            t_ok = False
    return PermissibilityFlags(omega_ok, omega_ok and t_ok)


def next_e_minus(previous_max: Optional[Fraction], current_max: Fraction, previous: Sequence[str], labels: Sequence[str]) -> Tuple[str, ...]:
    """E⁻ of the current stage: reset to all of E when max ω dropped (or at the start)."""
    if previous_max is None or current_max < previous_max:
        return tuple(labels)
    return tuple(lab for lab in previous if lab in labels)


# ----------------------------------------------------------------------
# auxiliary objects
# ----------------------------------------------------------------------
def exceptional_monomial(obj: BasicObject, chart_id: str) -> Ideal:
    """𝒞 = Π I(H)^{a_H} over the exceptional members of the chart."""
    ideal = obj.ideal(chart_id)
    result = Ideal.unit(ideal.vars, ideal.m)
    for lab, f in obj.exceptional_members(chart_id):
        a = order_along_member(ideal, f)
        if a:
            result = result * member_ideal(f).power(a)
    return result


def b_prime(obj: BasicObject, kmax: int) -> BasicObject:
    """
    B′ of the positive-ω case: (Ī, b_r) when b_r ≥ b, otherwise
    (Ī^{b-b_r} + 𝒞^{b_r}, b_r(b - b_r)).
    """
    if kmax <= 0:
        raise NotMonomial("B′ is only defined when max ω > 0")
    b = obj.b
    ideals = {}
    for cid in obj.chart_ids():
        proper = obj.proper(cid)
        if kmax >= b:
            ideals[cid] = proper
        else:
            ideals[cid] = proper.power(b - kmax) + exceptional_monomial(obj, cid).power(kmax)
    index = kmax if kmax >= b else kmax * (b - kmax)
    return BasicObject(obj.pair, tuple((cid, ideals[cid]) for cid in obj.chart_ids()), index, obj.step, obj.exceptional)


def b_doubleprime(obj: BasicObject, kmax: int, e_minus: Iterable[str], pieces: Mapping[str, Sequence[str]]) -> BasicObject:
    """
    B″ = (I′ + Σ_{H∈T} I(H)^{b′}, b′, E⁺) with T the Max(t)-piece of each chart and
    E⁺ = E ∖ E⁻. Charts without a piece keep I′.
    """
    prime = b_prime(obj, kmax)
    e_minus = set(e_minus)
    ideals = {}
    for cid in prime.chart_ids():
        ideal = prime.ideal(cid)
        for lab in pieces.get(cid, ()):
            ideal = ideal + member_ideal(obj.pair.member(lab).equation(cid)).power(prime.b)
        ideals[cid] = ideal
    E_plus = tuple(h for h in obj.pair.E if h.label not in e_minus)
    pair = SPair(obj.pair.charts, E_plus)
    exceptional = tuple(lab for lab in obj.exceptional if lab not in e_minus)
    return BasicObject(pair, tuple((cid, ideals[cid]) for cid in prime.chart_ids()), prime.b, obj.step, exceptional)


def homogenized(ideal: Ideal, b: int) -> Ideal:
    """H(I, b) = I + Σ_{1≤i<b} Δ^i(I)·T^i with T = Δ^{b-1}(I)."""
    ladder = delta_cache(ideal)
    T = ladder.get(b - 1)
    result = ideal
    for i in range(1, b):
        result = result + ladder.get(i) * T.power(i)
    return result


def homogenized_object(obj: BasicObject) -> BasicObject:
    return obj.with_ideals({cid: homogenized(obj.ideal(cid), obj.b) for cid in obj.chart_ids()})


def coefficient_ideal(ideal: Ideal, b: int, z: str) -> Tuple[Ideal, int]:
    """
    Coefficient ideal restricted to V(z): Σ_{i<b} (Δ^i(I)|_Z)^{b!/(b-i)}, of index b!.
    Each Δ^i is restricted before it is raised to its power.
    """
    ladder = delta_cache(ideal)
    total = factorial(b)
    rest = tuple(v for v in ideal.vars if v != z)
    result = Ideal.zero(rest, ideal.m)
    for i in range(b):
        result = result + ladder.get(i).restrict(z).power(total // (b - i))
    return result, total


# ----------------------------------------------------------------------
# monomial case
# ----------------------------------------------------------------------
@dataclass(frozen=True, order=True)
class GammaValue:
    neg_gamma1: int
    gamma2: Fraction
    gamma3: Tuple[int, ...]

    def as_tuple(self) -> Tuple:
        return (self.neg_gamma1, self.gamma2) + self.gamma3

    def __str__(self) -> str:
        return f"(-{-self.neg_gamma1}, {self.gamma2}, {self.gamma3})"


@dataclass
class GammaResult:
    value: GammaValue
    labels: Tuple[str, ...]
    center: CenterSpec


def monomial_data(obj: BasicObject, chart_id: str) -> Dict[str, int]:
    """α_H for every E-member present in the chart (order of I along H)."""
    ideal = obj.ideal(chart_id)
    return {lab: order_along_member(ideal, f) for lab, f in obj.pair.members_in(chart_id)}


def is_premonomial(obj: BasicObject) -> bool:
    """The fiber proper transform is a unit in a neighbourhood of Sing(B)."""
    fib = obj.fiber()
    return all((fib.singular_ideal(cid) + fib.proper(cid)).is_unit() for cid in fib.chart_ids())


def factorization_holds(obj: BasicObject, chart_id: str) -> bool:
    """I = Π I(H)^{α_H} at full level."""
    ideal = obj.ideal(chart_id)
    rebuilt = Ideal.unit(ideal.vars, ideal.m)
    for lab, f in obj.pair.members_in(chart_id):
        a = order_along_member(ideal, f)
        if a:
            rebuilt = rebuilt * member_ideal(f).power(a)
    return rebuilt.equals(ideal)


def _gamma_keys(obj: BasicObject, chart_id: str, sing: Ideal) -> List[Tuple[GammaValue, Tuple[str, ...]]]:
    alpha = monomial_data(obj, chart_id)
    labels = obj.pair.labels()
    present = [lab for lab in labels if lab in alpha]
    if len(present) > settings.GAMMA_GUARD:
        raise GuardExceeded(f"{len(present)} E-members on chart {chart_id} exceed the guard {settings.GAMMA_GUARD}")
    keys = []
    for size in range(1, len(present) + 1):
        for T in itertools.combinations(present, size):
            total = sum(alpha[lab] for lab in T)
            if total < obj.b:
                continue
            ideal = sing.fiber()
            for lab in T:
                ideal = ideal + member_ideal(obj.pair.member(lab).equation(chart_id).fiber())
            if ideal.is_unit():
                continue
            indices = tuple(sorted((labels.index(lab) + 1 for lab in T), reverse=True))
            keys.append((GammaValue(-size, Fraction(total, obj.b), indices), T))
    return keys


def gamma(obj: BasicObject) -> GammaResult:
    """
    max Γ over Sing and the canonical center ∩_{H∈T*} H.

    Raises:
    - NotMonomial: the fiber proper transform is not the unit ideal on some chart.
    - GuardExceeded: too many E-members on a chart.
    """
    if not is_premonomial(obj):
        raise NotMonomial("Γ needs a premonomial object (fiber proper transform equal to 1)")
    fib = obj.fiber()
    per_chart: Dict[str, List[Tuple[GammaValue, Tuple[str, ...]]]] = {}
    for cid in obj.chart_ids():
        sing = fib.singular_ideal(cid)
        if sing.is_unit():
            continue
        per_chart[cid] = _gamma_keys(obj, cid, sing)
    candidates = [k for keys in per_chart.values() for k in keys]
    if not candidates:
        raise NotMonomial("No exceptional combination reaches the index on Sing(B)")
    best, best_T = max(candidates, key=lambda k: k[0])
    components: Dict[str, Optional[ChartCenter]] = {}
    for cid in obj.chart_ids():
        hit = [T for v, T in per_chart.get(cid, []) if v == best]
        components[cid] = _intersection_center(obj, cid, hit[0]) if hit else None
    return GammaResult(best, best_T, CenterSpec.of(components))


def _intersection_center(obj: BasicObject, chart_id: str, T: Sequence[str]) -> ChartCenter:
    eqs = [obj.pair.member(lab).equation(chart_id) for lab in T]
    names = [coordinate_var(f) for f in eqs]
    if all(n is not None for n in names):
        return ChartCenter((), tuple(names))
    if len(eqs) == 1:
        return ChartCenter(divisor=eqs[0])
    ideal = Ideal(eqs[0].vars, eqs[0].m, tuple(eqs))
    protected = list(obj.pair.e_vars(chart_id).values())
    return normalize_center(ideal, protected)


def canonical_center(obj: BasicObject) -> CenterSpec:
    return gamma(obj).center


def is_monomial(obj: BasicObject) -> bool:
    """Premonomial and the canonical center is permissible for obj itself."""
    if not is_premonomial(obj):
        return False
    return obj.is_permissible_center(canonical_center(obj)).ok


def is_gamma_permissible(obj: BasicObject) -> bool:
    """obj monomial and its canonical-center transform is monomial again (or resolved)."""
    if not is_monomial(obj):
        return False
    nxt = obj.transform(canonical_center(obj))
    return nxt.sing_is_empty() or is_monomial(nxt)


# ----------------------------------------------------------------------
# exceptional exponents versus recorded orders
# ----------------------------------------------------------------------
def _lineage(chart_id: str, candidates: Iterable[str]) -> Optional[str]:
    best = None
    for cid in candidates:
        if chart_id == cid or chart_id.startswith(cid + "."):
            if best is None or len(cid) > len(best):
                best = cid
    return best


def check_sigma_identity(obj: BasicObject, births: Mapping[str, Mapping[str, Fraction]]) -> List[str]:
    """
    For every exceptional H present on a chart: a_H = b·(σ_i(C_i) - 1), where σ_i is the
    recorded order ν(I_i, C_i)/b of the step that created H on the ancestor chart.
    Returns the violations.
    """
    problems = []
    for cid in obj.chart_ids():
        exps = obj.exceptional_exponents(cid)
        for lab, a in exps.items():
            record = births.get(lab)
            if not record:
                continue
            parent = _lineage(cid, record.keys())
            if parent is None:
                continue
            expected = obj.b * (record[parent] - 1)
            if Fraction(a) != expected:
                problems.append(f"{cid}: exponent of {lab} is {a}, recorded orders give {expected}")
    return problems


def omega_sigma_identity(obj: BasicObject, center: CenterSpec, births: Mapping[str, Mapping[str, Fraction]]) -> bool:
    """ω(C) = σ(C) - Σ_{H ⊇ C} (σ_birth(H) - 1) on every component of the center."""
    omegas = omega_of_center(obj, center)
    sigmas = sigma(obj, center)
    for cid, cc in center.components:
        if cc is None:
            continue
        total = sigmas[cid]
        for lab, f in obj.exceptional_members(cid):
            if not _contains_center(obj, cid, cc, f):
                continue
            record = births.get(lab, {})
            parent = _lineage(cid, record.keys())
            if parent is None:
                return False
            total -= record[parent] - 1
        if total != omegas[cid]:
            return False
    return True
