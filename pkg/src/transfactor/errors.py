"""Exception types shared across the library."""


class ParameterError(ValueError):
    """An argument is outside its documented domain."""


class CapacityError(RuntimeError):
    """An instance exceeds a hard size cap of an exact algorithm."""


class NoPerfectMatchingError(RuntimeError):
    """A host graph admits no perfect matching."""


class PipelineFailureError(RuntimeError):
    """A randomized pipeline stage failed after exhausting its retry budget.

    Carries a ``diagnostics`` dict so callers can log what happened.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
