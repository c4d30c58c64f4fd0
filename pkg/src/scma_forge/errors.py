"""Exception types shared across the package."""


class ScmaError(Exception):
    """Base class for all scma_forge errors."""


class ParameterError(ScmaError, ValueError):
    """Invalid combination of design parameters (e.g. divisibility)."""


class ConstructionError(ScmaError, RuntimeError):
    """A constructive algorithm could not produce a valid result."""


class ValidationError(ScmaError, ValueError):
    """A domain invariant does not hold.

    ``invariant`` names the violated invariant so callers (and error
    messages) can report exactly which check failed.
    """

    def __init__(self, invariant, message=None):
        self.invariant = invariant
        super().__init__(message or invariant)


class SchemaError(ScmaError, ValueError):
    """A persisted document is malformed or has an unsupported schema."""
