"""Exception hierarchy shared by every module."""


class GeurError(ValueError):
    """Base class for all validation failures raised by geur."""


class DimensionMismatch(GeurError):
    pass


class UnknownLabel(GeurError):
    pass


class NotHermitian(GeurError):
    pass


class DomainError(GeurError):
    pass


class InvalidArity(GeurError):
    pass


class RankError(GeurError):
    pass


class NotADistribution(GeurError):
    pass


class EmptyRemainder(GeurError):
    pass


class InvariantViolation(GeurError):
    """A density-matrix invariant failed; ``invariant`` names which one."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}")
