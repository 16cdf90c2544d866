"""Exception types shared across the package."""


class FinordError(Exception):
    """Base class for package-specific errors."""


class HypothesisError(FinordError, ValueError):
    """An operation's mathematical precondition does not hold for the input."""


class BudgetError(FinordError, RuntimeError):
    """A search or construction exceeded its element or node budget."""

    def __init__(self, message, *, stage=None, used=None, budget=None):
        super().__init__(message)
        self.stage = stage
        self.used = used
        self.budget = budget


class FormatError(FinordError, ValueError):
    """A serialized universe, poset, or report failed to parse."""
