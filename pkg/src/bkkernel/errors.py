class BudgetError(RuntimeError):
    """A computation would exceed its configured size budget."""

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what}: size {size} exceeds budget {budget}")
        self.what = what
        self.size = size
        self.budget = budget


class SpecError(ValueError):
    """Malformed group, torus or weight specification."""
