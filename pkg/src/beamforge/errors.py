"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Raised when user-supplied data violates a documented precondition."""


class VerificationError(RuntimeError):
    """Raised when an emitted solution fails its own residual check.

    This signals an internal inconsistency, not bad input.
    """
