# tests/integration/test_embedded.py

import pytest

from equires.exceptions import BadInput
from equires.models.basic_object import ROOT_CHART, IdTriple
from equires.operations.ideal import parse_ideal
from equires.operations.poly import parse_poly
from equires.resolution.embedded import is_smooth, jacobian_minors, principalize, resolve_embedded

XY = ("x", "y")


def triple(gens, E=(), m=2) -> IdTriple:
    members = [(label, parse_poly(text, XY, m)) for label, text in E]
    return IdTriple.create(parse_ideal(gens, XY, m), members)


# ---------------------------------------------
# Principalization
# ---------------------------------------------

def test_monomial_ideal_needs_no_blowup() -> None:
    """x^2 y with E = {V(x), V(y)} is already a monomial in E."""
    result = principalize(triple(["x^2*y"], E=(("H1", "x"), ("H2", "y"))))
    assert result.already_monomial
    assert (result.e, result.ell) == (0, 0)
    assert result.exponents == {ROOT_CHART: {"H1": 2, "H2": 1}}
    assert result.equiprincipalizable


def test_principalize_double_line() -> None:
    """
    Test (x^2) with index one.

    Steps:
    1. V(x) is blown up once in the t-case, then once more as the monomial center.
    2. The total transform is the square of the last exceptional hypersurface.
    """
    result = principalize(triple(["x^2"]))
    assert not result.already_monomial
    assert result.ell == 2, f"Expected two blow-ups, got {result.ell}"
    assert result.monomial
    assert result.equiprincipalizable
    assert sum(result.exponents[ROOT_CHART].values()) == 2


# ---------------------------------------------
# Embedded resolution
# ---------------------------------------------

def test_smooth_curve_is_its_own_center() -> None:
    report = resolve_embedded(triple(["y - x^2"]))
    assert report.eta == 0
    assert report.codim == 1
    assert report.level == "A"
    assert report.smooth and report.snc and report.transversal
    assert sorted(report.strict) == [ROOT_CHART]


@pytest.mark.parametrize(
    "gens, message",
    [(["x^2"], "not reduced"), (["1"], "proper subvariety")],
    ids=["double_line", "empty"]
)
def test_embedded_rejects(gens, message) -> None:
    with pytest.raises(BadInput, match=message):
        resolve_embedded(triple(gens))


@pytest.mark.parametrize(
    "gens, codim, expected",
    [
        (["y - x^2"], 1, True),
        (["x*y"], 1, False),
        (["x", "y"], 2, True),
        (["y^2 - x^3"], 1, False),
    ],
    ids=["parabola", "node", "point", "cusp"]
)
def test_is_smooth(gens, codim, expected) -> None:
    assert is_smooth(parse_ideal(gens, XY, 2), codim) is expected


def test_jacobian_minors_of_parabola() -> None:
    minors = jacobian_minors(parse_ideal(["y - x^2"], XY, 2), 1)
    assert minors.is_unit()
    assert minors.m == 1
