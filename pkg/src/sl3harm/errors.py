"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """Requested computation exceeds the configured enumeration budget."""


class QuadratureError(RuntimeError):
    """Numerical integration failed to converge to the requested tolerance."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class GenericityError(ValueError):
    """Spectral parameter sits on an exclusion hyperplane."""


class PoleError(ValueError):
    """Evaluation requested at a pole of a c-function factor."""
