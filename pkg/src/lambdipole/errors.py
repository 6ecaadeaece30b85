"""Exception and warning types shared across the package."""

__all__ = [
    "BlowUpError",
    "BracketError",
    "ConvergenceError",
    "CostGuardError",
    "ResolutionError",
    "TruncationWarning",
]


class CostGuardError(RuntimeError):
    """Requested computation exceeds a hard cost limit."""


class BracketError(RuntimeError):
    """A root or minimum bracket could not be established."""


class ConvergenceError(RuntimeError):
    """Iteration failed to converge; carries per-iteration telemetry."""

    def __init__(self, message, telemetry=None):
        super().__init__(message)
        self.telemetry = telemetry if telemetry is not None else []


class BlowUpError(RuntimeError):
    """Time integration produced non-finite values; carries the last good state."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class ResolutionError(ValueError):
    """Grid spacing is too coarse to resolve the requested structure."""


class TruncationWarning(UserWarning):
    """Field mass is not well contained inside the computational box."""
