"""Exception types shared across the package."""


class ClaimOrderError(Exception):
    """Base class for all package errors."""


class DomainError(ClaimOrderError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(ClaimOrderError, ArithmeticError):
    """A numerical evaluation produced an out-of-range or non-finite value."""


class SingularityError(ClaimOrderError, ArithmeticError):
    """A denominator underflowed to zero; the caller decides how to truncate."""


class GridError(ClaimOrderError, ValueError):
    """A grid is empty, too small, or not strictly increasing."""


class SolverError(ClaimOrderError, RuntimeError):
    """A feasibility solver failed to converge (distinct from 'infeasible')."""


class SpecError(ClaimOrderError, ValueError):
    """An instance-specification file failed to parse or validate."""
