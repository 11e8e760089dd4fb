"""Finite weighted index sets and the function spaces built on them.

A :class:`WeightedSet` is a nonempty ordered list of labels with strictly
positive weights.  Scalar-valued functions on it are :class:`ScalarFunction`
values; functions with values in a finite-dimensional normed space are
:class:`VectorFunction` values, stored as an ``(n, dim)`` array.

All objects are immutable: arrays are copied on construction and marked
read-only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, FieldError, ShapeError

REL_TOL = 1e-9
ABS_TOL = 1e-12


def _frozen(a, dtype=None) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _as_values(values) -> np.ndarray:
    arr = np.asarray(values)
    if np.iscomplexobj(arr):
        return _frozen(arr, np.complex128)
    return _frozen(arr, np.float64)


def field_of(values: np.ndarray) -> str:
    return "complex" if np.iscomplexobj(values) else "real"


def check_same_field(*objs) -> str:
    fields = {o.field for o in objs}
    if len(fields) > 1:
        raise FieldError("real and complex functions cannot be mixed; promote with .to_complex()")
    return fields.pop()


class WeightedSet:
    """Nonempty finite set with a strictly positive weight on each point.

    ``factors`` is set only for sets built by :meth:`product`, and records the
    two factor sets so that :func:`curry` can split the index unambiguously.
    """

    __slots__ = ("labels", "weights", "factors", "_index")

    def __init__(self, labels: Sequence, weights=None, factors=None):
        labels = tuple(str(x) for x in labels)
        if len(labels) == 0:
            raise DomainError("a weighted set needs at least one point")
        if len(set(labels)) != len(labels):
            raise DomainError("labels must be distinct")
        if weights is None:
            weights = np.ones(len(labels))
        w = _frozen(weights, np.float64)
        if w.shape != (len(labels),):
            raise ShapeError(f"expected {len(labels)} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise DomainError("every weight must be finite and strictly positive")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "factors", factors)
        object.__setattr__(self, "_index", {x: i for i, x in enumerate(labels)})

    def __setattr__(self, name, value):
        raise AttributeError("WeightedSet is immutable")

    @classmethod
    def unit(cls, n: int) -> "WeightedSet":
        return cls([str(i + 1) for i in range(n)], np.ones(n))

    @classmethod
    def uniform(cls, n: int) -> "WeightedSet":
        """The uniform probability weight on ``n`` points."""
        return cls([str(i + 1) for i in range(n)], np.full(n, 1.0 / n))

    @classmethod
    def product(cls, first: "WeightedSet", second: "WeightedSet") -> "WeightedSet":
        """Cartesian product with weight w((x, y)) = w1(x) w2(y), row-major order."""
        labels = [f"({x},{y})" for x in first.labels for y in second.labels]
        weights = np.outer(first.weights, second.weights).ravel()
        return cls(labels, weights, factors=(first, second))

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise DomainError(f"label {label!r} is not in the index set") from None

    @property
    def total_weight(self) -> float:
        return float(np.sum(self.weights))

    def is_probability(self, tol: float = REL_TOL) -> bool:
        return abs(self.total_weight - 1.0) <= tol

    def is_unit(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedSet):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.weights, other.weights)

    def __hash__(self) -> int:
        return hash((self.labels, self.weights.tobytes()))

    def __repr__(self) -> str:
        return f"WeightedSet(labels={list(self.labels)}, weights={self.weights.tolist()})"


def _check_domain(a: WeightedSet, b: WeightedSet) -> None:
    if a is not b and a != b:
        raise DomainError("functions live on different index sets")


@dataclass(frozen=True, eq=False)
class ScalarFunction:
    domain: WeightedSet
    values: np.ndarray

    def __post_init__(self):
        vals = _as_values(self.values)
        if vals.shape != (self.domain.n,):
            raise ShapeError(f"expected {self.domain.n} values, got shape {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def field(self) -> str:
        return field_of(self.values)

    def __call__(self, label):
        return self.values[self.domain.index(label)]

    def __len__(self) -> int:
        return self.values.shape[0]

    def to_complex(self) -> "ScalarFunction":
        return ScalarFunction(self.domain, self.values.astype(np.complex128))

    def with_values(self, values) -> "ScalarFunction":
        return ScalarFunction(self.domain, values)

    def abs(self) -> "ScalarFunction":
        return ScalarFunction(self.domain, np.abs(self.values))

    def __add__(self, other: "ScalarFunction") -> "ScalarFunction":
        _check_domain(self.domain, other.domain)
        check_same_field(self, other)
        return ScalarFunction(self.domain, self.values + other.values)

    def __sub__(self, other: "ScalarFunction") -> "ScalarFunction":
        _check_domain(self.domain, other.domain)
        check_same_field(self, other)
        return ScalarFunction(self.domain, self.values - other.values)

    def __neg__(self) -> "ScalarFunction":
        return ScalarFunction(self.domain, -self.values)

    def __mul__(self, alpha) -> "ScalarFunction":
        if isinstance(alpha, (ScalarFunction, VectorFunction)):
            return pointwise_multiply(self, alpha)
        return ScalarFunction(self.domain, self.values * alpha)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarFunction):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"ScalarFunction({self.values.tolist()})"


@dataclass(frozen=True, eq=False)
class VectorFunction:
    """A function on ``domain`` with values in ``space`` (a NormedSpace)."""

    domain: WeightedSet
    space: object
    values: np.ndarray

    def __post_init__(self):
        vals = _as_values(self.values)
        dim = self.space.dimension
        if vals.ndim == 1 and dim == 1:
            vals = _frozen(vals.reshape(-1, 1))
        if vals.shape != (self.domain.n, dim):
            raise ShapeError(f"expected values of shape {(self.domain.n, dim)}, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def field(self) -> str:
        return field_of(self.values)

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def __call__(self, label) -> np.ndarray:
        return self.values[self.domain.index(label)]

    def coordinate(self, j: int) -> ScalarFunction:
        """The scalar function x -> f(x)[j]."""
        return ScalarFunction(self.domain, self.values[:, j])

    def to_complex(self) -> "VectorFunction":
        return VectorFunction(self.domain, self.space, self.values.astype(np.complex128))

    def with_values(self, values) -> "VectorFunction":
        return VectorFunction(self.domain, self.space, values)

    def __add__(self, other: "VectorFunction") -> "VectorFunction":
        _check_domain(self.domain, other.domain)
        check_same_field(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "VectorFunction") -> "VectorFunction":
        _check_domain(self.domain, other.domain)
        check_same_field(self, other)
        return self.with_values(self.values - other.values)

    def __neg__(self) -> "VectorFunction":
        return self.with_values(-self.values)

    def __mul__(self, alpha) -> "VectorFunction":
        return self.with_values(self.values * alpha)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorFunction):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"VectorFunction({self.values.tolist()})"


def delta(domain: WeightedSet, x) -> ScalarFunction:
    """The basis function equal to 1 at ``x`` and 0 elsewhere."""
    values = np.zeros(domain.n)
    values[domain.index(x)] = 1.0
    return ScalarFunction(domain, values)


def expand(f: ScalarFunction) -> ScalarFunction:
    """Rebuild ``f`` as the sum of f(x) * delta_x over the basis."""
    acc = np.zeros_like(f.values)
    for x in f.domain.labels:
        acc = acc + f(x) * delta(f.domain, x).values
    return ScalarFunction(f.domain, acc)


def pointwise_multiply(f: ScalarFunction, g):
    """(f g)(x) = f(x) g(x) for a scalar or vector-valued ``g``."""
    _check_domain(f.domain, g.domain)
    check_same_field(f, g)
    if isinstance(g, VectorFunction):
        return g.with_values(f.values[:, None] * g.values)
    return ScalarFunction(f.domain, f.values * g.values)


def curry(f: ScalarFunction, p: float = 2.0) -> VectorFunction:
    """View a function on E1 x E2 as an F(E2)-valued function on E1.

    The codomain F(E2) carries the weighted ``p``-norm of E2; ``p`` only
    matters for later norm evaluations.
    """
    from .norms import NormedSpace

    if f.domain.factors is None:
        raise ShapeError("curry needs a domain built with WeightedSet.product")
    first, second = f.domain.factors
    space = NormedSpace.weighted_lp(p, second.weights, index_set=second)
    return VectorFunction(first, space, f.values.reshape(first.n, second.n))


def uncurry(F: VectorFunction) -> ScalarFunction:
    """Inverse of :func:`curry`."""
    second = getattr(F.space, "index_set", None)
    if second is None:
        raise ShapeError("codomain does not record its index set; was this produced by curry()?")
    product = WeightedSet.product(F.domain, second)
    return ScalarFunction(product, F.values.reshape(-1))


@dataclass(frozen=True, eq=False)
class ValueTransform:
    """A linear map on the value space V, as a dim x dim matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_values(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"value transform must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def field(self) -> str:
        return field_of(self.matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class LiftedValueTransform:
    """A applied pointwise to the values: (A~ f)(x) = A(f(x))."""

    def __init__(self, transform: ValueTransform):
        self.transform = transform

    def __call__(self, F: VectorFunction) -> VectorFunction:
        A = self.transform
        if A.dim != F.dim:
            raise ShapeError(f"transform has dimension {A.dim}, values have dimension {F.dim}")
        check_same_field(A, F)
        return F.with_values(F.values @ A.matrix.T)


class LiftedIndexTransform:
    """A scalar operator T applied to every coordinate slice: T^(f v) = T(f) v."""

    def __init__(self, scalar_op: Callable, space=None):
        self.scalar = scalar_op
        self.space = space

    def __call__(self, F: VectorFunction) -> VectorFunction:
        if self.space is not None and F.space.dimension != self.space.dimension:
            raise ShapeError("vector function lives in a different value space")
        matrix = getattr(self.scalar, "plain_matrix", None)
        if matrix is not None:
            _check_domain(self.scalar.domain, F.domain)
            M = matrix()
            check_same_field(_FieldTag(field_of(M)), F)
            return F.with_values(M @ F.values)
        cols = [self.scalar(F.coordinate(j)).values for j in range(F.dim)]
        return F.with_values(np.stack(cols, axis=1))


@dataclass(frozen=True)
class _FieldTag:
    field: str


def lift_value_transform(A) -> LiftedValueTransform:
    if not isinstance(A, ValueTransform):
        A = ValueTransform(A)
    return LiftedValueTransform(A)


def lift_index_transform(T, V=None) -> LiftedIndexTransform:
    return LiftedIndexTransform(T, V)
