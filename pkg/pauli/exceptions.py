class QCubeError(Exception):
    """Base exception for observable, cube and learning issues."""


class InputError(QCubeError, ValueError):
    """Raised when an argument or an input format is invalid."""


class CapacityError(QCubeError):
    """Raised when a dense or exhaustive computation exceeds its configured limit."""


class OracleError(QCubeError):
    """Raised when a query oracle fails part way through a batch."""

    def __init__(self, message: str, completed: int = 0) -> None:
        super().__init__(message)
        self.completed = completed
