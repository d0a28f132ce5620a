"""Exact deformation computations for abelian complex structures on 2-step nilmanifolds."""

from nilkur.errors import InputError, InvariantViolation

__version__ = "0.1.0"

__all__ = ["InputError", "InvariantViolation", "__version__"]
