class HamspecError(Exception):
    """Base class for library errors."""


class CapacityError(HamspecError, ValueError):
    """Problem size exceeds what a dense representation supports."""


class ParameterError(HamspecError, ValueError):
    """Arguments violate an operation's preconditions."""


class VerificationError(HamspecError):
    """A checked identity or inequality failed.

    ``witness`` carries the offending point/level when one exists.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ConsistencyError(HamspecError):
    """Internal inconsistency, e.g. a root count that disagrees with the degree."""
