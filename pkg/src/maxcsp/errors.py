"""Exception types shared across the package."""


class MaxCspError(Exception):
    """Base class for all package-specific errors."""


class FormatError(MaxCspError):
    """Malformed input: bad file syntax, wrong row width, bad pattern slot."""


class CapExceededError(MaxCspError):
    """A size cap was hit (constraint arity, oracle variable count, ...)."""


class PreconditionError(MaxCspError):
    """An operation was invoked outside its stated preconditions."""
