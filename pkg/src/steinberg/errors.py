class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured size budget."""


class NotSymplecticError(ValueError):
    pass


class MalformedMatrixError(ValueError):
    pass


class TruncationError(ValueError):
    """A norm-truncated complex is too small for the requested chain."""

    def __init__(self, message: str, required_bound: int):
        super().__init__(f"{message} (required bound: {required_bound})")
        self.required_bound = required_bound
