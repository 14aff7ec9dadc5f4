# tests/unit/test_scalar.py

from fractions import Fraction

import pytest

from equires.exceptions import BadInput, NonUnit
from equires.operations.scalar import (
    ArtinScalar,
    add,
    fiber,
    inverse,
    multiply,
    subtract,
    truncate,
    valuation,
)


# ---------------------------------------------
# Ring operations
# ---------------------------------------------

@pytest.mark.parametrize(
    "a, b, m, expected",
    [
        ([1, 2], [3, 4], 2, [4, 6]),
        ([0, 1], [0, 1], 3, [0, 2, 0]),
        ([Fraction(1, 2)], [Fraction(1, 3)], 1, [Fraction(5, 6)]),
    ],
    ids=["add_units", "add_nilpotents", "add_fractions_on_the_fiber"]
)
def test_add(a, b, m, expected) -> None:
    """
    Test coefficientwise addition.

    Steps:
    1. Build both scalars with the same truncation order.
    2. Assert the sum has the expected coefficient vector.
    """
    result = add(ArtinScalar.of(a, m), ArtinScalar.of(b, m))
    assert result == ArtinScalar.of(expected, m), f"Expected {expected}, but got {result}"


def test_subtract_gives_zero() -> None:
    a = ArtinScalar.of([2, -1, 5], 3)
    assert subtract(a, a).is_zero(), "Expected a - a to be zero"


@pytest.mark.parametrize(
    "a, b, m, expected",
    [
        ([0, 1], [0, 1], 2, [0, 0]),
        ([0, 1], [0, 1], 3, [0, 0, 1]),
        ([1, 1], [1, -1], 2, [1, 0]),
        ([2, 3], [5], 2, [10, 15]),
    ],
    ids=["eps_squared_vanishes_at_m2", "eps_squared_survives_at_m3", "conjugates", "scaling"]
)
def test_multiply(a, b, m, expected) -> None:
    """
    Test truncated multiplication.

    Parameters:
    - a, b: coefficient vectors.
    - m: truncation order.
    - expected: coefficient vector of the product.
    """
    result = multiply(ArtinScalar.of(a, m), ArtinScalar.of(b, m))
    assert result == ArtinScalar.of(expected, m), f"Expected {expected}, but got {result}"


# ---------------------------------------------
# Units and inverses
# ---------------------------------------------

@pytest.mark.parametrize(
    "coeffs, m",
    [
        ([1, 2], 3),
        ([3, 0, 7], 3),
        ([Fraction(-1, 2), 1, 1, 1], 4),
    ],
    ids=["one_plus_eps", "three_plus_eps_squared", "fractional_fiber"]
)
def test_inverse(coeffs, m) -> None:
    a = ArtinScalar.of(coeffs, m)
    assert multiply(a, inverse(a)) == ArtinScalar.one(m), f"Expected {a} * {inverse(a)} to be 1"


def test_inverse_of_nilpotent_raises() -> None:
    """
    Test that inverting an element with zero constant term raises NonUnit.
    """
    with pytest.raises(NonUnit, match="is not a unit"):
        inverse(ArtinScalar.eps_power(1, 2))


def test_nonunit_is_value_error() -> None:
    with pytest.raises(ValueError):
        ArtinScalar.zero(3).inverse()


# ---------------------------------------------
# Fiber, valuation, truncation
# ---------------------------------------------

@pytest.mark.parametrize(
    "coeffs, m, expected",
    [
        ([4, 1], 2, 0),
        ([0, 0, 5], 3, 2),
        ([0, 0], 2, 2),
    ],
    ids=["unit", "eps_squared", "zero"]
)
def test_valuation(coeffs, m, expected) -> None:
    result = valuation(ArtinScalar.of(coeffs, m))
    assert result == expected, f"Expected valuation {expected}, but got {result}"


def test_fiber_drops_eps_terms() -> None:
    assert fiber(ArtinScalar.of([Fraction(3, 4), 9, 9], 3)) == Fraction(3, 4)


def test_truncate_is_a_ring_map(rng) -> None:
    """
    Test that truncation commutes with multiplication on random elements.

    Steps:
    1. Draw random coefficient vectors with the seeded generator.
    2. Compare truncate(a*b) with truncate(a)*truncate(b).
    """
    for _ in range(20):
        a = ArtinScalar.of([rng.randint(-5, 5) for _ in range(3)], 3)
        b = ArtinScalar.of([rng.randint(-5, 5) for _ in range(3)], 3)
        lhs = truncate(multiply(a, b), 2)
        rhs = multiply(truncate(a, 2), truncate(b, 2))
        assert lhs == rhs, f"Expected truncation to be multiplicative for {a}, {b}"


def test_truncate_upwards_raises() -> None:
    with pytest.raises(BadInput, match="Cannot truncate"):
        truncate(ArtinScalar.one(2), 3)


def test_mixed_orders_raise() -> None:
    with pytest.raises(BadInput, match="Mixed truncation orders"):
        ArtinScalar.one(2) + ArtinScalar.one(3)


@pytest.mark.parametrize(
    "coeffs, m, expected",
    [
        ([0], 1, "0"),
        ([2, 1], 2, "2 + eps"),
        ([0, -1, 3], 3, "-eps + 3*eps^2"),
    ],
    ids=["zero", "unit", "nilpotent"]
)
def test_str(coeffs, m, expected) -> None:
    assert str(ArtinScalar.of(coeffs, m)) == expected
