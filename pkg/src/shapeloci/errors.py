"""Exception hierarchy.

``AnomalyError`` is special: it is raised when a computation contradicts a
known theorem (e.g. an uncrossing that should exist does not).  The CLI maps
it to exit code 2 instead of 1.
"""


class ShapeLociError(Exception):
    pass


class DomainError(ShapeLociError, ValueError):
    """Input outside the mathematical domain of an operation."""


class PreconditionError(DomainError):
    pass


class RankDeficientError(DomainError):
    def __init__(self, message, achieved_rank):
        super().__init__(message)
        self.achieved_rank = achieved_rank


class EmptyMatroidError(DomainError):
    pass


class CapabilityError(ShapeLociError):
    """The request is well-posed but exceeds what we are willing to compute."""


class ConsistencyError(ShapeLociError, AssertionError):
    """Internal invariant violated: a bug in this package."""


class AnomalyError(ShapeLociError):
    """A finding that would contradict a published theorem."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
