"""Weighted lp norms on finite sets: inequalities, operator norms, trace quasinorms."""
from ._version import __version__
from .errors import (
    DegenerateInputError,
    DomainError,
    FieldError,
    LpBenchError,
    NotExactError,
    PreconditionError,
    ShapeError,
    UsageError,
)
from .norms import INF, Certificate, NormedSpace, conjugate, lp_norm, vector_norm, weighted_norm
from .operators import KernelOperator, MultiplicationOperator, operator_norm
from .space import ScalarFunction, VectorFunction, WeightedSet, curry, delta, uncurry
from .tracenorm import LinearMap, trace_quasinorm

__all__ = [
    "__version__",
    "INF",
    "Certificate",
    "DegenerateInputError",
    "DomainError",
    "FieldError",
    "KernelOperator",
    "LinearMap",
    "LpBenchError",
    "MultiplicationOperator",
    "NormedSpace",
    "NotExactError",
    "PreconditionError",
    "ScalarFunction",
    "ShapeError",
    "UsageError",
    "VectorFunction",
    "WeightedSet",
    "conjugate",
    "curry",
    "delta",
    "lp_norm",
    "operator_norm",
    "trace_quasinorm",
    "uncurry",
    "vector_norm",
    "weighted_norm",
]
