"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range user input (CLI exit code 1)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (CLI exit code 2); always a bug."""
