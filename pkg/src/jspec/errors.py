"""Exception hierarchy shared by every jspec module."""


class JSpecError(Exception):
    """Base class for all errors raised by jspec."""


class ModeMismatchError(JSpecError):
    """Exact and float values were mixed in one operation."""


class ShapeError(JSpecError, ValueError):
    """Matrix or tuple shapes are incompatible."""


class NonCommutingError(JSpecError):
    """A tuple that must commute does not."""

    def __init__(self, pair, residual):
        self.pair = pair
        self.residual = residual
        super().__init__(f"operators {pair[0]} and {pair[1]} do not commute (residual {residual:g})")


class DeflationError(JSpecError):
    """Joint eigenvalue enumeration could not produce a certified candidate set."""


class SpecError(JSpecError, ValueError):
    """An operator specification (diagonal, shift, JSON input) is invalid."""


class InternalError(JSpecError):
    """An internal consistency check failed (for example d o d != 0)."""
