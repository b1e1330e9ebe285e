"""Exception types shared across fibercox."""


class FibercoxError(Exception):
    """Base class for all library errors."""


class BudgetExceeded(FibercoxError):
    """An explicit expansion or enumeration would exceed its configured budget."""


class PreconditionError(FibercoxError, ValueError):
    """An operation was called with inputs outside its domain."""


class DisconnectedError(FibercoxError):
    """A connected complex was required.

    ``component`` holds the vertex labels of one connected component, as a witness.
    """

    def __init__(self, message, component=()):
        super().__init__(message)
        self.component = tuple(component)


class HypothesisViolation(FibercoxError):
    """A structural hypothesis (5-largeness, orbit membership, ...) failed at runtime."""
