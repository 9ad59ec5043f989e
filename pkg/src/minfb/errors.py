"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or rejected input (bad file, bad row, bad vertex id)."""


class ResourceError(RuntimeError):
    """A configured cap (keys, leaves, partitions) would be exceeded."""

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = dict(estimates or {})


class NotApplicable(Exception):
    """A solver's precondition does not hold for this instance."""
