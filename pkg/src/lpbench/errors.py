"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class LpBenchError(Exception):
    """Base class for all library errors."""


class DomainError(LpBenchError, ValueError):
    """Unknown label, mismatched index sets, or an argument outside its domain."""


class ShapeError(LpBenchError, ValueError):
    """Array dimensions that do not fit together."""


class FieldError(LpBenchError, TypeError):
    """Real and complex data mixed in one computation."""


class UsageError(LpBenchError, ValueError):
    """Exponents or parameters that violate the stated relation for an operation."""


class PreconditionError(LpBenchError, ValueError):
    """A numeric precondition (normalization, probability weight, contraction) failed."""


class DegenerateInputError(PreconditionError):
    """Input is identically zero where a nonzero function is required."""


class NotExactError(LpBenchError):
    """Only a lower bound is available but an exact value was demanded."""
