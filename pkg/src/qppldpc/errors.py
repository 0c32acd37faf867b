"""Exception types shared across the package."""


class RejectedInputError(ValueError):
    """Input is well-formed but unusable here, e.g. a graph with parallel edges."""


class StructuralViolationError(RuntimeError):
    """A structural property that must hold by construction did not."""


class BudgetExceededError(RuntimeError):
    """The requested computation exceeds the configured size budget."""
