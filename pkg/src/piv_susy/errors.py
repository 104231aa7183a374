"""Exception hierarchy.

Every numerical failure mode is an exception; no routine returns NaN or Inf
as a silent value.
"""


class PivSusyError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(PivSusyError, ValueError):
    """Argument sits on a pole of a special function."""


class PoleAtB(PoleError):
    pass


class PoleAtNonPositiveInteger(PoleError):
    pass


class GammaPole(PoleError):
    pass


class RangeExceeded(PivSusyError, ValueError):
    pass


class NonFiniteValue(PivSusyError, ArithmeticError):
    pass


class InsufficientOrder(PivSusyError, ValueError):
    pass


class ZeroDenominator(PivSusyError, ZeroDivisionError):
    pass


class OrderMismatch(PivSusyError, ValueError):
    pass


class PositionMismatch(PivSusyError, ValueError):
    pass


class SingularPoint(PivSusyError):
    """A Wronskian vanishes (numerically) at a requested point."""

    def __init__(self, message, locations=()):
        super().__init__(message)
        self.locations = tuple(locations)


class DegenerateLevel(PivSusyError, ValueError):
    pass


class SingularExtremalState(SingularPoint):
    pass


class DegenerateG(PivSusyError):
    pass


class NotDegenerate(PivSusyError, ValueError):
    pass
