"""Exception hierarchy shared by every module."""


class SymIndexError(Exception):
    """Base class for all library errors."""


class DimensionError(SymIndexError, ValueError):
    pass


class ValidationError(SymIndexError, ValueError):
    pass


class UnclassifiableBlockError(ValidationError):
    """A generic block whose end matrix cannot be read off as an AG normal form."""


class PreconditionError(SymIndexError, ValueError):
    pass


class NumericalFailure(SymIndexError, ArithmeticError):
    """A numerical engine could not certify its answer.

    ``condition`` carries whatever diagnostic number the engine had at hand
    (a residual, a condition estimate, the last ladder values).
    """

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class ConsistencyError(SymIndexError, AssertionError):
    """Two routes that must agree exactly did not."""
