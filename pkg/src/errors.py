"""Exception types raised by the algebra engines."""

from __future__ import annotations


class DatumError(ValueError):
    """Raised when a Borcherds-Cartan datum violates one of its conditions."""


class MissingTauError(ValueError):
    """Raised when a tau value for a node and level is not configured."""


class CutoffExceeded(ValueError):
    """Raised when a degree leaves the height cutoff an object was built with."""


class ExpressionError(ValueError):
    """Raised for malformed generator expressions."""


class ConsistencyError(RuntimeError):
    """Raised when an internal cross-check fails."""
