"""Exception types shared across the package."""


class DrivenLMGError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(DrivenLMGError, ValueError):
    """An argument violates a precondition (bad N, wrong dimension, ...)."""


class DomainError(DrivenLMGError, ValueError):
    """A coordinate lies outside the domain of the requested map."""


class DegenerateDirectionError(DrivenLMGError, ValueError):
    """A direction-dependent map was asked for a zero-length vector."""


class UnsupportedResonanceError(DrivenLMGError, ValueError):
    """Operation only implemented for the zero-resonance-index case."""


class IntegrationAccuracyError(DrivenLMGError, RuntimeError):
    """A numerical tolerance was not met; try tighter integrator settings."""
