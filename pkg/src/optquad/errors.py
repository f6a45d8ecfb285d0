"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Raised when (m, N) or another user parameter is outside the supported range."""

    def __init__(self, message: str, flag: str | None = None):
        super().__init__(message)
        self.flag = flag


class SingularSystemError(ArithmeticError):
    """A pivot collapsed during elimination; raise the working precision."""
