# tests/unit/test_chart.py

import random

import pytest

from equires.exceptions import NotACoordinateChange, PermissibilityError, UnsupportedCenter
from equires.models.basic_object import BasicObject
from equires.models.chart import (
    CenterSpec,
    Chart,
    ChartCenter,
    CoordinateChange,
    Hypersurface,
    SPair,
    blowup,
    coordinate_var,
    is_smooth_divisor,
    normalize_center,
    rewrite_members,
    validate_pair,
)
from equires.operations.ideal import Ideal, parse_ideal
from equires.operations.poly import Poly, parse_poly
from equires.operations.scalar import ArtinScalar
from tests.conftest import origin_permissible_object

XY = ("x", "y")


def P(text, vars=XY, m=2) -> Poly:
    return parse_poly(text, vars, m)


def pair_with(*members) -> SPair:
    chart = Chart("c0", XY, 2)
    return SPair((chart,), tuple(Hypersurface(label, (("c0", P(eq)),)) for label, eq in members))


# ---------------------------------------------
# Coordinate changes
# ---------------------------------------------

def test_change_moves_translated_coordinate() -> None:
    """x' = x + eps turns x + eps into x."""
    change = CoordinateChange("x", ArtinScalar.one(2), P("eps"))
    assert change.apply(P("x + eps")) == P("x")
    assert change.revert(P("x")) == P("x + eps")
    assert str(change) == "x' = x + eps"


def test_change_with_unit_linear_part() -> None:
    change = CoordinateChange("x", ArtinScalar.of([1, 1], 2), P("eps*y"))
    f = P("x^2 + y")
    assert change.revert(change.apply(f)) == f, "Expected revert to undo apply"
    assert change.has_identity_fiber(), "Expected 1 + eps and eps*y to reduce to the identity on the fiber"


@pytest.mark.parametrize(
    "c, h",
    [([0, 1], "y"), ([1], "x*y")],
    ids=["nilpotent_linear_part", "translation_depends_on_var"]
)
def test_invalid_change_raises(c, h) -> None:
    with pytest.raises(NotACoordinateChange):
        CoordinateChange("x", ArtinScalar.of(c, 2), P(h))


@pytest.mark.parametrize(
    "text, expected",
    [("x", "x"), ("-2*y", "y"), ("x + eps", None), ("x*y", None), ("eps*x", None)],
    ids=["variable", "unit_multiple", "translated", "product", "nilpotent_multiple"]
)
def test_coordinate_var(text, expected) -> None:
    assert coordinate_var(P(text)) == expected


# ---------------------------------------------
# Center normalization
# ---------------------------------------------

def test_normalize_translated_point() -> None:
    """
    Test normalization of V(y, x + eps).

    Steps:
    1. Normalize the ideal.
    2. One change moves x; the center is V(x, y) afterwards.
    3. The base ideal gives back the input.
    """
    ideal = parse_ideal(["y", "x + eps"], XY, 2)
    cc = normalize_center(ideal)
    assert set(cc.vars) == {"x", "y"}, f"Expected V(x, y), got {cc.vars}"
    assert [c.var for c in cc.changes] == ["x"]
    assert cc.base_ideal(XY, 2).equals(ideal)
    assert cc.has_identity_fiber()


def test_normalize_unit_ideal_is_none() -> None:
    assert normalize_center(parse_ideal(["1 + eps*x"], XY, 2)) is None


def test_normalize_rejects_fat_point() -> None:
    with pytest.raises(UnsupportedCenter):
        normalize_center(parse_ideal(["x^2", "y"], XY, 2))


def test_protected_variable_falls_back_to_divisor() -> None:
    """y is an E-member, so V(y - x^2) stays a smooth divisor."""
    ideal = parse_ideal(["y - x^2"], XY, 2)
    cc = normalize_center(ideal, protected=["y"])
    assert cc.divisor is not None and cc.codim == 1
    with pytest.raises(UnsupportedCenter):
        normalize_center(ideal, protected=["y"], allow_divisor=False)


def test_fiber_identity_required() -> None:
    with pytest.raises(UnsupportedCenter):
        normalize_center(parse_ideal(["x - 1", "y"], XY, 2), require_fiber_identity=True)
    cc = normalize_center(parse_ideal(["x - eps", "y"], XY, 2), require_fiber_identity=True)
    assert cc.has_identity_fiber()


@pytest.mark.parametrize(
    "text, expected",
    [("y - x^2", True), ("x*y", False), ("1 + eps*x", False)],
    ids=["parabola", "node", "unit"]
)
def test_is_smooth_divisor(text, expected) -> None:
    assert is_smooth_divisor(P(text)) is expected


# ---------------------------------------------
# S-pairs
# ---------------------------------------------

@pytest.mark.parametrize(
    "members, allow, fragment",
    [
        ((("H1", "x"), ("H1", "y")), False, "duplicate label H1"),
        ((("H1", "x"), ("H2", "-x")), False, "duplicates hypersurface H1"),
        ((("H1", "y - x^2"),), False, "is not a coordinate hypersurface"),
        ((("H1", "x*y"),), True, "is not smooth"),
    ],
    ids=["duplicate_label", "same_hypersurface", "non_coordinate", "singular_divisor"]
)
def test_validate_pair_problems(members, allow, fragment) -> None:
    problems = validate_pair(pair_with(*members), allow_divisors=allow)
    assert any(fragment in p for p in problems), f"Expected {fragment!r} in {problems}"


def test_validate_pair_accepts_normal_crossings() -> None:
    assert validate_pair(pair_with(("H1", "x"), ("H2", "y"))) == []
    assert validate_pair(pair_with(("H1", "y - x^2")), allow_divisors=True) == []


def test_rewrite_members_logs_change() -> None:
    pair = pair_with(("H1", "x + eps"))
    change = CoordinateChange("x", ArtinScalar.one(2), P("eps"))
    rewritten = rewrite_members(pair, "c0", [change])
    assert rewritten.e_vars("c0") == {"H1": "x"}
    assert rewritten.chart("c0").log == (change,)
    assert rewritten.chart("c0").to_base(Ideal.of_vars(["x"], XY, 2)).equals(parse_ideal(["x + eps"], XY, 2))


# ---------------------------------------------
# Blow-ups
# ---------------------------------------------

def test_blowup_of_origin_creates_two_charts() -> None:
    """
    Test the blow-up of the plane at the origin with E = {V(x)}.

    Steps:
    1. Blow up along V(x, y) with the new label H2.
    2. Check chart ids, substitutions and exceptional equations.
    3. Check the strict transform of H1 leaves the x-chart.
    """
    obj = BasicObject.create(parse_ideal(["y^2", "x^3"], XY, 2), 2, [("H1", P("x"))])
    center = CenterSpec.of({"c0": ChartCenter((), ("x", "y"))})
    pair, record = blowup(obj.pair, center, "H2", step=0)

    assert pair.chart_ids() == ["c0.x", "c0.y"], f"Unexpected charts {pair.chart_ids()}"
    tx = record.transition("c0.x")
    assert tx.exceptional == P("x")
    assert dict(tx.substitution) == {"y": P("x*y")}
    assert pair.member("H1").equation("c0.x") is None
    assert pair.member("H1").equation("c0.y") == P("x")
    assert pair.e_vars("c0.y") == {"H1": "x", "H2": "y"}
    assert pair.chart("c0.y").parent == ("c0", 0)

    pulled = tx.pull_back(obj.ideal("c0"))
    assert pulled.equals(parse_ideal(["x^2*y^2", "x^3"], XY, 2)), f"Got {pulled}"


def test_codimension_one_center_keeps_chart() -> None:
    obj = BasicObject.create(parse_ideal(["x^2*y"], XY, 2), 2, [("H1", P("x"))])
    center = CenterSpec.of({"c0": ChartCenter((), ("x",))})
    pair, record = blowup(obj.pair, center, "H2")
    assert pair.chart_ids() == ["c0"]
    assert record.transition("c0").exceptional == P("x")
    assert pair.member("H1").equation("c0") is None, "Expected H1 to be replaced by the new member"
    assert pair.member("H2").equation("c0") == P("x")


def test_center_inside_non_coordinate_member_raises() -> None:
    pair = pair_with(("H1", "y - x^2"))
    center = CenterSpec.of({"c0": ChartCenter((), ("x", "y"))})
    with pytest.raises(PermissibilityError):
        blowup(pair, center, "H2")


def test_charts_without_center_are_kept() -> None:
    obj = BasicObject.create(parse_ideal(["y^2", "x^3"], XY, 2), 2)
    first, _ = blowup(obj.pair, CenterSpec.of({"c0": ChartCenter((), ("x", "y"))}), "H1")
    second, record = blowup(first, CenterSpec.of({"c0.x": None, "c0.y": ChartCenter((), ("x", "y"))}), "H2", 1)
    assert second.chart_ids() == ["c0.x", "c0.y.x", "c0.y.y"]
    assert [t.child for t in record.children_of("c0.x")] == ["c0.x"]


@pytest.mark.parametrize("seed", range(30))
def test_blowup_commutes_with_base_change(seed) -> None:
    """
    Test that blowing up over Q[eps]/(eps^3) and then truncating agrees with truncating first.

    Steps:
    1. Build a random object over m = 3 with the origin permissible.
    2. Compare transform-then-truncate with truncate-then-transform for m' = 2 and m' = 1.
    """
    obj = origin_permissible_object(random.Random(seed), m=3)
    center = CenterSpec.of({"c0": ChartCenter((), XY)})
    new = obj.transform(center)
    for m_new in (2, 1):
        upstairs = new.truncate(m_new)
        downstairs = obj.truncate(m_new).transform(center)
        assert upstairs.same_as(downstairs), f"seed {seed}, m'={m_new}: {obj.ideal('c0')}, b={obj.b}"
        assert upstairs.pair.labels() == downstairs.pair.labels()
