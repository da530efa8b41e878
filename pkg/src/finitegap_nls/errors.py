"""Structured exceptions carrying machine-readable diagnostics."""


class FiniteGapError(Exception):
    """Base class. ``details`` is a JSON-friendly dict."""

    exit_code = 3

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def as_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), **self.details}


class SchemaError(FiniteGapError):
    """Invalid configuration or input data."""

    exit_code = 2


class DegenerateSurfaceError(FiniteGapError):
    pass


class QuadratureError(FiniteGapError):
    pass


class ThetaError(FiniteGapError):
    pass


class InconsistentSystemError(FiniteGapError):
    pass


class SingularityError(FiniteGapError):
    pass


class ContourProximityError(FiniteGapError):
    pass


class DomainError(FiniteGapError):
    pass


class RegimeError(FiniteGapError):
    pass


class ConvergenceError(FiniteGapError):
    pass
