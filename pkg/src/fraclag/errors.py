"""Exception types shared across the package."""


class ConvergenceError(RuntimeError):
    """An iterative kernel (eigensolver, series summation) failed to converge."""


class EvaluationError(RuntimeError):
    """A user-supplied function returned a non-finite value at a quadrature node."""
