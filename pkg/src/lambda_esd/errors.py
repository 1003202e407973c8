"""Exception hierarchy shared by all modules."""


class LambdaESDError(ValueError):
    """Base class for domain errors raised by this package."""


class NonFiniteEntry(LambdaESDError):
    pass


class NotHermitian(LambdaESDError):
    pass


class ConvergenceFailure(LambdaESDError, ArithmeticError):
    pass


class DimensionMismatch(LambdaESDError):
    pass


class InvalidState(LambdaESDError):
    """A matrix failed one of the density-matrix invariants.

    ``invariant`` names the violated property: ``"shape"``, ``"finite"``,
    ``"hermitian"``, ``"trace"``, ``"psd"`` or ``"spectrum"``.
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class NotNormalized(LambdaESDError):
    pass


class InvalidXParams(LambdaESDError):
    pass


class NegativeTime(LambdaESDError):
    pass


class UnsupportedParams(LambdaESDError):
    pass


class InvalidParams(LambdaESDError):
    pass


class TruncationLeak(LambdaESDError):
    pass


class BadRange(LambdaESDError):
    pass
