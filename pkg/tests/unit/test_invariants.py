# tests/unit/test_invariants.py

from fractions import Fraction

import pytest

from equires.exceptions import NotMonomial, OutOfDomain
from equires.models.basic_object import ROOT_CHART
from equires.models.chart import CenterSpec, ChartCenter
from equires.operations.ideal import parse_ideal
from equires.resolution.invariants import (
    b_doubleprime,
    b_prime,
    canonical_center,
    check_omega_t_permissible,
    coefficient_ideal,
    gamma,
    homogenized,
    is_amenable,
    is_gamma_permissible,
    is_monomial,
    is_premonomial,
    next_e_minus,
    omega_at,
    omega_of_center,
    profile,
    sigma,
    t_at,
)
from tests.conftest import make_object

XY = ("x", "y")
XYZ = ("x", "y", "z")
ORIGIN = CenterSpec.of({ROOT_CHART: ChartCenter((), XY)})
ALL_EXCEPTIONAL = (("H1", "x"), ("H2", "y"), ("H3", "z"))


@pytest.fixture
def monomial_object():
    """x^2 y^3 z, b=4, every coordinate hyperplane exceptional."""
    return make_object(["x^2*y^3*z"], 4, vars=XYZ, E=ALL_EXCEPTIONAL, exceptional=("H1", "H2", "H3"))


# ---------------------------------------------
# ω and t
# ---------------------------------------------

def test_profile_of_cusp(cusp_object) -> None:
    """
    Test max ω of (y^2, x^3), b=2.

    Steps:
    1. Evaluate the profile with an empty E⁻.
    2. max ω is 1, reached along Sing = V(y, x^2).
    """
    prof = profile(cusp_object)
    assert prof.max_omega == Fraction(1), f"Expected max omega 1, got {prof.max_omega}"
    assert prof.max_t == (Fraction(1), 0)
    assert not prof.empty
    assert prof.top_charts() == [ROOT_CHART]


def test_profile_counts_members_of_e_minus() -> None:
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "x"),))
    prof = profile(obj, ["H1"])
    assert prof.max_t == (Fraction(1), 1)
    chart = prof.charts[ROOT_CHART]
    assert chart.pieces == [("H1",)]
    assert chart.max_t(obj.pair).equals(parse_ideal(["x", "y"], XY, 1))
    assert is_amenable(prof, ROOT_CHART) == ("H1",)


def test_profile_of_resolved_object() -> None:
    prof = profile(make_object(["x"], 2))
    assert prof.empty
    assert prof.max_omega == 0
    assert is_amenable(prof, ROOT_CHART) is None, "A chart without Max(t) has no piece"


@pytest.mark.parametrize(
    "point, expected",
    [({"x": 0, "y": 0}, Fraction(1))],
    ids=["origin"]
)
def test_omega_at(cusp_object, point, expected) -> None:
    point = {k: Fraction(v) for k, v in point.items()}
    assert omega_at(cusp_object, ROOT_CHART, point) == expected


def test_omega_outside_sing_raises(cusp_object) -> None:
    with pytest.raises(OutOfDomain):
        omega_at(cusp_object, ROOT_CHART, {"x": Fraction(1), "y": Fraction(0)})


def test_omega_and_sigma_of_center(cusp_object) -> None:
    assert omega_of_center(cusp_object, ORIGIN) == {ROOT_CHART: Fraction(1)}
    assert sigma(cusp_object, ORIGIN) == {ROOT_CHART: Fraction(1)}


def test_origin_is_omega_and_t_permissible() -> None:
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "x"),))
    prof = profile(obj, ["H1"])
    flags = check_omega_t_permissible(obj, ORIGIN, prof, ["H1"])
    assert flags.omega and flags.t


@pytest.mark.parametrize(
    "previous_max, current_max, previous, labels, expected",
    [
        (None, Fraction(1), (), ("H1", "H2"), ("H1", "H2")),
        (Fraction(2), Fraction(1), ("H1",), ("H1", "H2"), ("H1", "H2")),
        (Fraction(1), Fraction(1), ("H1",), ("H1", "H2"), ("H1",)),
    ],
    ids=["start", "omega_dropped", "omega_kept"]
)
def test_next_e_minus(previous_max, current_max, previous, labels, expected) -> None:
    assert next_e_minus(previous_max, current_max, previous, labels) == expected


# ---------------------------------------------
# Auxiliary objects
# ---------------------------------------------

def test_b_prime_with_large_order(cusp_object) -> None:
    assert b_prime(cusp_object, 2).same_as(cusp_object)


def test_b_prime_with_small_order() -> None:
    """(x^2 y, 2) with V(x) exceptional: Ī = (y), max order 1, B′ = ((y, x^2), 1)."""
    obj = make_object(["x^2*y"], 2, E=(("H1", "x"),), exceptional=("H1",))
    prof = profile(obj)
    assert prof.kmax == 1
    prime = b_prime(obj, prof.kmax)
    assert prime.b == 1
    assert prime.ideal(ROOT_CHART).equals(parse_ideal(["y", "x^2"], XY, 2))


def test_b_prime_needs_positive_order(cusp_object) -> None:
    with pytest.raises(NotMonomial):
        b_prime(cusp_object, 0)


def test_homogenized_cusp() -> None:
    ideal = parse_ideal(["y^2", "x^3"], XY, 2)
    result = homogenized(ideal, 2)
    assert result.equals(parse_ideal(["y^2", "x^2*y", "x^3"], XY, 2)), f"Got {result}"


def test_coefficient_ideal_of_quintic() -> None:
    """Restricting every Δ-power to z = 0 before raising it gives (x^30) of index 24."""
    ideal = parse_ideal(["x^5 + eps*x^2*z + z^4"], ("x", "z"), 2)
    coeff, index = coefficient_ideal(ideal, 4, "z")
    assert index == 24
    assert coeff.equals(parse_ideal(["x^30"], ("x",), 2)), f"Got {coeff}"


# ---------------------------------------------
# Monomial case
# ---------------------------------------------

def test_gamma_of_monomial(monomial_object) -> None:
    """
    Test Γ on x^2 y^3 z, b=4.

    Steps:
    1. Sing is V(x, y) ∪ V(y, z).
    2. The pair {x, y} wins with (-2, 5/4, (2, 1)).
    3. The canonical center is V(x, y).
    """
    result = gamma(monomial_object)
    assert result.value.as_tuple() == (-2, Fraction(5, 4), 2, 1), f"Got {result.value}"
    assert result.labels == ("H1", "H2")
    center = result.center.get(ROOT_CHART)
    assert set(center.vars) == {"x", "y"}
    assert is_monomial(monomial_object)


def test_gamma_needs_premonomial(cusp_object) -> None:
    assert not is_premonomial(cusp_object)
    with pytest.raises(NotMonomial):
        canonical_center(cusp_object)


def test_t_at_counts_members_through_the_point() -> None:
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "x"),))
    origin = {"x": Fraction(0), "y": Fraction(0)}
    assert t_at(obj, ROOT_CHART, origin, ["H1"]) == (Fraction(1), 1)
    assert t_at(obj, ROOT_CHART, origin, []) == (Fraction(1), 0)


def test_b_doubleprime_adds_the_piece() -> None:
    """B″ of the cusp with E⁻ = {V(x)}: ((y^2, x^3) + (x)^2, 2) with E⁺ empty."""
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "x"),))
    prof = profile(obj, ["H1"])
    pieces = {ROOT_CHART: is_amenable(prof, ROOT_CHART)}
    result = b_doubleprime(obj, prof.kmax, ["H1"], pieces)
    assert result.b == 2
    assert result.pair.labels() == []
    assert result.ideal(ROOT_CHART).equals(parse_ideal(["y^2", "x^2"], XY, 2)), f"Got {result.ideal(ROOT_CHART)}"


@pytest.mark.parametrize(
    "gens, E, exceptional, expected",
    [
        (["x^2"], (("H1", "x"),), ("H1",), True),
        (["y^2", "x^3"], (), (), False),
    ],
    ids=["monomial_line", "cusp"]
)
def test_is_gamma_permissible(gens, E, exceptional, expected) -> None:
    obj = make_object(gens, 1, E=E, exceptional=exceptional)
    assert is_gamma_permissible(obj) is expected
