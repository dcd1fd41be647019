"""Exception hierarchy shared by every module."""


class RobinLabError(Exception):
    """Base class for all errors raised by robinlab."""


class DomainError(RobinLabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(RobinLabError):
    """Request exceeds what the sieve or representation can hold."""


class DivisibilityError(RobinLabError, ValueError):
    """A prime was expected to divide (or not divide) a number."""


class PreconditionError(RobinLabError, ValueError):
    """A theorem's stated hypothesis is not met and exploratory mode is off."""


class TieError(RobinLabError):
    """A floor or ordering decision sits within rounding error of a boundary."""


class UndecidedError(RobinLabError):
    """An adaptive comparison could not separate its operands at max precision."""


class NoBracketError(RobinLabError):
    """Root finding could not bracket the target value."""
