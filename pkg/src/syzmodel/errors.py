"""Exception hierarchy.

Every error raised on bad input derives from :class:`ValidationError`; the CLI
maps those to exit code 1. Broken internal invariants raise
:class:`InternalCheckError` (exit code 2).
"""


class SyzModelError(Exception):
    """Base class for all package errors."""


class ValidationError(SyzModelError):
    """Input violates a documented precondition."""


class InternalCheckError(SyzModelError):
    """A runtime self-check failed; indicates a bug or an unsupported input."""


class OriginNotInterior(ValidationError):
    pass


class Unbounded(ValidationError):
    pass


class NotProperFace(ValidationError):
    pass


class Degenerate(ValidationError):
    pass


class EmptyOrLowerDim(ValidationError):
    pass


class NotGenericHeights(ValidationError):
    pass


class NotCentral(ValidationError):
    pass


class NotInRelativeInterior(ValidationError):
    pass


class NotOrderPreserving(ValidationError):
    pass


class NotSummand(ValidationError):
    pass


class EpsTooLarge(ValidationError):
    pass


class ExhaustedAttempts(ValidationError):
    pass


class NotDualPair(ValidationError):
    pass


class NotDiscriminantVertex(ValidationError):
    pass


class NonPrimitive(ValidationError):
    pass


class NotAdjacent(ValidationError):
    pass


class InvalidLoop(ValidationError):
    pass


class PairingViolation(ValidationError):
    pass


class DegenerateSlice(ValidationError):
    pass


class EmptySample(ValidationError):
    pass


class InstanceError(ValidationError):
    """Malformed instance file; ``where`` names the offending field or line."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
