"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` used by the CLI's
single-line error format.
"""


class DomainError(ValueError):
    """An argument lies outside the documented domain of an operation."""

    code = "domain"


class NonDifferentiableError(DomainError):
    """The copula's partial derivative is undefined at the requested point."""

    code = "nondifferentiable"


class DegenerateVarianceError(DomainError):
    """A normal approximation was requested for a zero-variance sum."""

    code = "degenerate-variance"


class RankRuleError(DomainError):
    """A rank rule produced a rank outside {1, ..., n}."""

    code = "rank-rule"


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds a configured size limit."""

    code = "resource"


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge within its subdivision budget.

    The achieved absolute error estimate is available as ``estimate``.
    """

    code = "quadrature"

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate
