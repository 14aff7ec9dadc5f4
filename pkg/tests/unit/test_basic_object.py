# tests/unit/test_basic_object.py

import random
from fractions import Fraction

import pytest

from equires.exceptions import BadInput, PermissibilityError
from equires.models.basic_object import (
    ROOT_CHART,
    BasicObject,
    ChartVerdict,
    IdTriple,
    PermissibilityVerdict,
    pre_equivalence_probe,
    proper_transform_exponent,
)
from equires.models.chart import CenterSpec, ChartCenter, CoordinateChange
from equires.operations.ideal import parse_ideal
from equires.operations.poly import Poly, parse_poly
from equires.operations.scalar import ArtinScalar
from tests.conftest import make_object, origin_permissible_object, random_ideal

XY = ("x", "y")
ORIGIN = CenterSpec.of({ROOT_CHART: ChartCenter((), XY)})


def shifted_center(value: Fraction) -> CenterSpec:
    """V(x + value*eps) on the line."""
    h = Poly.eps(("x",), 2).scale(ArtinScalar.constant(value, 2))
    return CenterSpec.of({ROOT_CHART: ChartCenter((CoordinateChange("x", ArtinScalar.one(2), h),), ("x",))})


# ---------------------------------------------
# Construction
# ---------------------------------------------

@pytest.mark.parametrize(
    "gens, b, E, exceptional, message",
    [
        (["eps*x"], 2, (), (), "zero fiber"),
        (["y^2", "x^3"], 0, (), (), "at least 1"),
        (["y^2", "x^3"], 2, (("H1", "x"),), ("H2",), "not E-members"),
        (["y^2", "x^3"], 2, (("H1", "x*y"),), (), "normal crossings"),
    ],
    ids=["zero_fiber", "index_zero", "unknown_exceptional", "singular_member"]
)
def test_create_rejects(gens, b, E, exceptional, message) -> None:
    """
    Test invalid basic objects.

    Parameters:
    - gens, b: the ideal and its index.
    - E, exceptional: the hypersurfaces and the exceptional labels.
    - message: fragment of the BadInput message.
    """
    with pytest.raises(BadInput, match=message):
        make_object(gens, b, E=E, exceptional=exceptional)


def test_create_normalizes_translated_member() -> None:
    """E = {V(x + eps)} becomes V(x); the ideal follows the change."""
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "x + eps"),))
    assert obj.pair.e_vars(ROOT_CHART) == {"H1": "x"}
    assert len(obj.chart(ROOT_CHART).log) == 1
    expected = parse_ideal(["y^2", "x^3 - 3*eps*x^2"], XY, 2)
    assert obj.ideal(ROOT_CHART).equals(expected), f"Expected {expected}, got {obj.ideal(ROOT_CHART)}"


def test_id_triple_as_basic_object(cusp_object) -> None:
    triple = IdTriple.create(parse_ideal(["y^2", "x^3"], XY, 2))
    assert triple.as_basic_object(2).same_as(cusp_object)
    assert not triple.as_basic_object(3).same_as(cusp_object)


# ---------------------------------------------
# Singular locus and permissibility
# ---------------------------------------------

def test_singular_locus_of_cusp(cusp_object) -> None:
    sing = cusp_object.singular_locus()
    assert str(sing[ROOT_CHART]) == "V(y, x^2)"
    assert not cusp_object.sing_is_empty()
    assert cusp_object.is_good()


def test_origin_is_permissible_for_cusp(cusp_object) -> None:
    verdict = cusp_object.is_permissible_center(ORIGIN)
    chart = verdict.charts[0]
    assert verdict.ok, f"Expected a permissible center: {verdict.diagnostics()}"
    assert (chart.nu, chart.nu_fiber, chart.in_sing) == (2, 2, True)
    assert chart.fast_path is True
    assert verdict.disagreements() == []


def test_fast_path_disagreement_is_reported() -> None:
    """
    Test a chart where the good-object test contradicts the order comparison.

    Steps:
    1. Build a verdict with nu=1, nu0=2 whose fast path claims permissible.
    2. Expect the chart listed in disagreements and named in the diagnostics.
    """
    chart = ChartVerdict("c0", 1, 2, True, fast_path=True)
    verdict = PermissibilityVerdict(chart.ok, (chart,))
    assert chart.fast_path_agrees is False
    assert verdict.disagreements() == ["c0"]
    assert "fast path says True" in verdict.diagnostics()[0]


def test_fiber_order_is_not_enough() -> None:
    """
    Test (eps*x + y^2 + x^3, b=2) at the origin.

    Steps:
    1. The fiber has order 2, so the origin lies in Sing.
    2. The order over A is 1, so the origin is not permissible.
    """
    obj = make_object(["eps*x + y^2 + x^3"], 2)
    verdict = obj.is_permissible_center(ORIGIN)
    chart = verdict.charts[0]
    assert (chart.nu, chart.nu_fiber, chart.in_sing) == (1, 2, True)
    assert not verdict.ok
    assert "nu=1, nu0=2" in verdict.diagnostics()[0]
    with pytest.raises(PermissibilityError):
        obj.transform(ORIGIN)


def test_empty_center_is_not_permissible(cusp_object) -> None:
    assert not cusp_object.is_permissible_center(CenterSpec.of({ROOT_CHART: None})).ok


# ---------------------------------------------
# Transforms
# ---------------------------------------------

def test_transform_of_cusp_at_origin(cusp_object) -> None:
    """
    Test the controlled transform of (y^2, x^3), b=2 at the origin.

    Steps:
    1. Blow up the origin.
    2. The x-chart carries (y^2, x); the y-chart carries the unit ideal.
    3. Sing is empty afterwards.
    """
    result, record = cusp_object.transform_with_record(ORIGIN)
    assert result.chart_ids() == ["c0.x", "c0.y"]
    assert result.ideal("c0.x").equals(parse_ideal(["y^2", "x"], XY, 2)), f"Got {result.ideal('c0.x')}"
    assert result.ideal("c0.y").is_unit()
    assert result.sing_is_empty()
    assert result.step == 1
    assert result.exceptional == (record.label,) == ("H1",)


def test_total_transform_and_exponent(cusp_object) -> None:
    total = cusp_object.total_transform(ORIGIN)
    assert total["c0.x"].equals(parse_ideal(["x^2*y^2", "x^3"], XY, 2))
    assert proper_transform_exponent(cusp_object, ORIGIN, "c0.x") == 2


def test_proper_transform_divides_exceptional() -> None:
    obj = make_object(["x^2*y", "x^3"], 1, E=(("H1", "x"),), exceptional=("H1",))
    assert obj.exceptional_exponents(ROOT_CHART) == {"H1": 2}
    assert obj.proper(ROOT_CHART).equals(parse_ideal(["y", "x"], XY, 2))
    assert obj.reconstruct(ROOT_CHART)


def test_fiber_commutes_with_transform(cusp_object) -> None:
    upstairs = cusp_object.transform(ORIGIN).fiber()
    downstairs = cusp_object.fiber().transform(ORIGIN.fiber())
    assert upstairs.same_as(downstairs)


@pytest.mark.parametrize("seed", range(30))
def test_permissible_iff_fiber_permissible_with_equal_order(seed) -> None:
    """
    Test that the origin is permissible over A exactly when it is permissible for the fiber
    and ν(I, C) = ν(I⁰, C⁰).

    Steps:
    1. Odd seeds build an object with the origin permissible, even seeds a random (I, b).
    2. Compare the verdict with the fiber verdict and the two orders.
    3. A permissible origin can be blown up.
    """
    rng = random.Random(seed)
    if seed % 2:
        obj = origin_permissible_object(rng)
    else:
        obj = BasicObject.create(random_ideal(rng), rng.randint(1, 3))
    ideal = obj.ideal(ROOT_CHART)
    origin = {"x": 0, "y": 0}
    same_order = ideal.order_at_point(origin) == ideal.order_at_point(origin, level="fiber")
    fiber_ok = obj.fiber().is_permissible_center(ORIGIN.fiber()).ok
    verdict = obj.is_permissible_center(ORIGIN)
    assert verdict.ok == (fiber_ok and same_order), f"seed {seed}: {verdict.diagnostics()}"
    if seed % 2:
        assert verdict.ok, f"seed {seed}: expected a permissible origin for {ideal}, b={obj.b}"
    if verdict.ok:
        assert obj.transform(ORIGIN).chart_ids() == ["c0.x", "c0.y"]


@pytest.mark.parametrize("seed", range(30))
def test_fiber_commutes_with_transform_on_random_objects(seed) -> None:
    obj = origin_permissible_object(random.Random(seed))
    upstairs = obj.transform(ORIGIN).fiber()
    downstairs = obj.fiber().transform(ORIGIN.fiber())
    assert upstairs.same_as(downstairs), f"seed {seed}: {obj.ideal(ROOT_CHART)}, b={obj.b}"


def test_truncate_to_one_is_the_fiber() -> None:
    obj = make_object(["y^2 + eps^2*x", "x^3 + eps*y"], 2, m=3)
    assert obj.truncate(1).same_as(obj.fiber())
    assert obj.truncate(2).m == 2


# ---------------------------------------------
# Pre-equivalence probe
# ---------------------------------------------

def test_probe_separates_lifts_of_the_same_fiber_center() -> None:
    """
    Test (x^2 + eps*x, 2) against (x^5, eps*x, 2) along V(x + eps/2).

    Steps:
    1. Only the first object admits the center.
    2. Both fibers admit V(x).
    """
    first = make_object(["x^2 + eps*x"], 2, vars=("x",))
    second = make_object(["x^5", "eps*x"], 2, vars=("x",))
    probe = pre_equivalence_probe(first, second, [[shifted_center(Fraction(1, 2))]])
    step = probe.steps[0]
    assert (step.verdict, step.verdict_other) == (True, False)
    assert (step.fiber_verdict, step.fiber_verdict_other) == (True, True)
    assert not probe.pre_equivalent
    assert probe.fibers_agree
    assert not probe.w_equivalent


def test_probe_of_an_object_with_itself(cusp_object) -> None:
    probe = pre_equivalence_probe(cusp_object, cusp_object, [[ORIGIN]])
    assert probe.w_equivalent
    assert probe.steps[0].center == "c0: V(x, y)" or probe.steps[0].center == "c0: V(y, x)"


def test_arbitrary_labels_survive_transform(build_object, fake_label) -> None:
    """E labels are opaque strings; new exceptional hypersurfaces get the next free H-label."""
    obj = build_object(["y^2", "x^3"], 2, E=[(fake_label, "x")], exceptional=(fake_label,))
    assert obj.pair.labels() == [fake_label]
    new = obj.transform(ORIGIN)
    assert new.pair.labels() == [fake_label, "H2"], f"Expected {fake_label} kept, got {new.pair.labels()}"
