"""Exception types shared by all modules."""


class SizeCapError(ValueError):
    """The instance exceeds a documented size cap (never answered silently)."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"instance too large for {what}: size {size} > cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class PreconditionError(ValueError):
    """An operation was called with arguments violating its contract."""


class InvariantViolation(AssertionError):
    """An internal guarantee (e.g. strict profile decrease) failed.

    This always signals a bug and is never caught inside the library.
    """


class FormatError(ValueError):
    """Malformed input file."""
