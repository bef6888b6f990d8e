"""Exception types raised across the package."""


class GenposError(ValueError):
    """Base class for all input and precondition failures."""


class DomainError(GenposError):
    """A numeric argument lies outside its admissible range."""


class PreconditionError(GenposError):
    """An operation was called with arguments violating its contract."""


class HypothesisError(GenposError):
    """The hypotheses of a certificate preset are not satisfied."""


class BracketError(GenposError):
    """The supplied bracket does not straddle the target value."""


class NonMonotoneError(GenposError):
    """A dimension equation is not monotone on the supplied bracket."""


class InapplicableError(GenposError):
    """A search cannot produce meaningful output for the given input."""
