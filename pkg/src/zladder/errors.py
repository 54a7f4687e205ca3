"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the supported domain of a function."""


class ConvergenceError(ArithmeticError):
    """An iterative solver or refinement loop failed to meet its tolerance."""
