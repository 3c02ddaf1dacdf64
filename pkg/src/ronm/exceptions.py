"""Exception types raised by the toolkit.

All derive from ValueError so callers that do not care about the fine
distinction can catch one base class.
"""


class NotHermitian(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class TraceNotOne(ValueError):
    """Input matrix does not have unit trace within tolerance."""


class DimensionMismatch(ValueError):
    """Operands have incompatible shapes or system dimensions."""


class TimeMismatch(ValueError):
    """Map segments are not contiguous in time."""


class NonPositiveEpsilon(ValueError):
    """A map duration must be strictly positive."""


class BadInterval(ValueError):
    """Integration interval or panel count is invalid."""


class NegativeInput(ValueError):
    """A nonnegative quantity was given a negative value."""


class PovmCountMismatch(ValueError):
    """POVM element count does not match the game's requirement."""


class EmptyEnsemble(ValueError):
    """An ensemble must contain at least one member."""


class InvalidDistribution(ValueError):
    """Probabilities are negative or do not sum to one."""


class ModelParseError(ValueError):
    """A model file could not be parsed; ``field`` names the offender."""

    def __init__(self, field: str, message: str):
        super().__init__(f"field '{field}': {message}")
        self.field = field
