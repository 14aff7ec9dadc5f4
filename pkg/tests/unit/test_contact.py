# tests/unit/test_contact.py

import pytest

from equires.exceptions import UnsupportedCenter
from equires.models.basic_object import ROOT_CHART
from equires.models.chart import CenterSpec, ChartCenter
from equires.operations.ideal import parse_ideal
from equires.operations.poly import parse_poly
from equires.resolution.contact import (
    check_adapted,
    check_derivative_transforms,
    find_adapted_hypersurface,
    inductive_object,
    is_strongly_permissible,
    lift_center,
    restrict_center,
    strict_transform_adapted,
)
from tests.conftest import make_object

XY = ("x", "y")
XZ = ("x", "z")
ORIGIN = CenterSpec.of({ROOT_CHART: ChartCenter((), XY)})


# ---------------------------------------------
# Adapted hypersurfaces
# ---------------------------------------------

@pytest.mark.parametrize(
    "text, var, expected",
    [
        ("y", "y", (True, True, True)),
        ("x + y", "y", (False, True, True)),
    ],
    ids=["y_is_adapted", "not_in_top_delta"]
)
def test_check_adapted(cusp_object, text, var, expected) -> None:
    """
    Test the three conditions for hypersurfaces of (y^2, x^3), b=2.

    Parameters:
    - text, var: the hypersurface V(text), solved for var.
    - expected: (a1, a2, a3).
    """
    hyp = check_adapted(cusp_object, ROOT_CHART, parse_poly(text, XY, 2), var)
    assert (hyp.a1, hyp.a2, hyp.a3) == expected, f"Got {(hyp.a1, hyp.a2, hyp.a3)} for V({text})"


def test_hypersurface_equal_to_member_is_not_transversal() -> None:
    obj = make_object(["y^2", "x^3"], 2, E=(("H1", "y"),))
    hyp = check_adapted(obj, ROOT_CHART, parse_poly("y", XY, 2), "y")
    assert hyp.a1 and not hyp.a2
    assert not hyp.inductive


def test_check_adapted_rejects_non_linear(cusp_object) -> None:
    with pytest.raises(UnsupportedCenter):
        check_adapted(cusp_object, ROOT_CHART, parse_poly("x*y", XY, 2), "y")


def test_search_finds_y(cusp_object) -> None:
    hyp = find_adapted_hypersurface(cusp_object, ROOT_CHART)
    assert hyp is not None
    assert hyp.var == "y" and hyp.change is None
    assert str(hyp) == "V(y)"


# ---------------------------------------------
# Inductive object
# ---------------------------------------------

@pytest.mark.parametrize("use_homogenized", [True, False], ids=["homogenized", "plain"])
def test_inductive_object_of_cusp(cusp_object, use_homogenized) -> None:
    hyp = check_adapted(cusp_object, ROOT_CHART, parse_poly("y", XY, 2), "y")
    lower = inductive_object(cusp_object, {ROOT_CHART: hyp}, use_homogenized=use_homogenized)
    assert lower.b == 2
    assert lower.chart(ROOT_CHART).vars == ("x",)
    assert lower.ideal(ROOT_CHART).equals(parse_ideal(["x^3"], ("x",), 2)), f"Got {lower.ideal(ROOT_CHART)}"


def test_inductive_object_needs_a_chart(cusp_object) -> None:
    with pytest.raises(UnsupportedCenter):
        inductive_object(cusp_object, {})


def test_permissible_upstairs_but_not_on_the_hypersurface() -> None:
    """
    Test (z^2 + eps*x^2, z^3 + x^3), b=2 with Z = V(z) and the center V(x) of Z.

    Steps:
    1. The inductive object is ((eps*x^2, x^3), 2).
    2. V(x) is not permissible for it: the order 2 over A is below the fiber order 3.
    3. The lifted center V(x, z) is permissible for the object itself.
    """
    obj = make_object(["z^2 + eps*x^2", "z^3 + x^3"], 2, vars=XZ)
    hyp = check_adapted(obj, ROOT_CHART, parse_poly("z", XZ, 2), "z")
    contacts = {ROOT_CHART: hyp}
    lower = inductive_object(obj, contacts, use_homogenized=False)
    assert lower.ideal(ROOT_CHART).equals(parse_ideal(["eps*x^2", "x^3"], ("x",), 2))

    verdict = is_strongly_permissible(obj, lower, contacts, CenterSpec.of({ROOT_CHART: ChartCenter((), ("x",))}))
    assert verdict.upper.ok
    assert not verdict.lower.ok
    assert not verdict.ok


def test_lift_and_restrict_center(cusp_object) -> None:
    hyp = check_adapted(cusp_object, ROOT_CHART, parse_poly("y", XY, 2), "y")
    lifted = lift_center(ChartCenter((), ("x",)), hyp, XY)
    assert lifted.vars == ("y", "x")
    assert restrict_center(lifted, hyp, XY).vars == ("x",)
    with pytest.raises(UnsupportedCenter):
        restrict_center(ChartCenter((), ("x",)), hyp, XY)


# ---------------------------------------------
# Transforms
# ---------------------------------------------

def test_strict_transform_of_contact(cusp_object) -> None:
    """V(y) survives in the x-chart and leaves the y-chart."""
    hyp = check_adapted(cusp_object, ROOT_CHART, parse_poly("y", XY, 2), "y")
    transformed, record = cusp_object.transform_with_record(ORIGIN)
    upper = strict_transform_adapted(hyp, record.transition("c0.x"), transformed)
    assert upper is not None and upper.equation == parse_poly("y", XY, 2)
    assert strict_transform_adapted(hyp, record.transition("c0.y"), transformed) is None


def test_derivative_transforms(cusp_object) -> None:
    transformed, record = cusp_object.transform_with_record(ORIGIN)
    problems = check_derivative_transforms(cusp_object, ORIGIN, transformed, record)
    assert problems == [], f"Unexpected problems: {problems}"
