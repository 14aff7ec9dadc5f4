# equires/exceptions.py

"""
Domain errors. Every error is a ValueError so callers that only guard against bad
values keep working; the CLI maps the subclasses to exit codes.
"""

from typing import Optional, Sequence


class EquiresError(ValueError):
    """Root of all library errors."""


class BadInput(EquiresError):
    """Malformed input document, polynomial text or out-of-range parameter."""


class NonUnit(EquiresError):
    """Inverse requested for an element with zero constant term."""


class UnknownVariable(EquiresError):
    """A variable name that is not a coordinate of the ring."""


class NotDivisible(EquiresError):
    """Exact division by a variable power failed on some generator."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class InfiniteOrder(EquiresError):
    """Order of the zero ideal."""


class UnsupportedCenter(EquiresError):
    """The ideal does not describe a smooth center in normal crossings with E."""


class NotACoordinateChange(EquiresError):
    """A substitution whose linear part is not invertible."""


class PermissibilityError(EquiresError):
    """A center failed a permissibility clause."""

    def __init__(self, message: str, clause: str = ""):
        super().__init__(message)
        self.clause = clause


class InvariantBreach(EquiresError):
    """A structural invariant that must hold after a transform did not."""


class OutOfDomain(EquiresError):
    """An invariant evaluated at a point where it is not defined."""


class NotMonomial(EquiresError):
    """Monomial-case invariant requested for a non-monomial object."""


class GuardExceeded(EquiresError):
    """An enumeration guard (E-list size, dimension, step count) was exceeded."""


class A3Breach(EquiresError):
    """A restricted object lost the point of maximal order."""


class AlgorithmStuck(EquiresError):
    """The driver reached a configuration it cannot continue from."""

    def __init__(self, message: str, trace: Sequence[str] = ()):
        super().__init__(message)
        self.trace = list(trace)
