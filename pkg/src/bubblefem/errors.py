"""Exception types shared across the solver."""


class DegenerateOperatorError(ArithmeticError):
    """Enrichment coefficients cannot be determined for this operator/length.

    Raised when a closed-form denominator or a normal-equation Gram matrix
    is zero up to round-off.  Callers typically fall back to plain linear
    elements.
    """


class LinearSolveError(ArithmeticError):
    """A linear system turned out singular or produced non-finite values."""


class AssemblyError(ArithmeticError):
    """A global system violates a structural requirement (e.g. SPD mass)."""


class IllPosedProblemError(ValueError):
    """Problem definition does not admit a unique solution."""
