"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """Threshold parameters or inputs outside their domain."""


class BudgetExceededError(RuntimeError):
    """An exhaustive enumeration would exceed its configured state budget."""

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what} needs {size} states, budget is {budget}")
        self.size = size
        self.budget = budget
