"""Trace norm and p-trace quasinorms of linear maps on a finite-dimensional normed space.

A map is written as ``sum_l c_l lambda_l(.) w_l`` with ``||w_l||_W <= 1``
and ``lambda_l`` of dual norm at most 1.  The trace norm is the infimum of
``sum |c_l|``; for ``0 < p <= 1`` the p-quasinorm is the infimum of
``(sum |c_l|^p)^(1/p)``.  Estimates here are always attained by a stored
representation, so they are upper bounds unless marked exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, ShapeError, UsageError
from .norms import EQ_TOL, INF, NormedSpace, as_exponent, conjugate, lp_norm
from .space import _as_values, field_of

ADMISSIBLE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LinearMap:
    space: NormedSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_values(self.matrix)
        d = self.space.dimension
        if m.shape != (d, d):
            raise ShapeError(f"expected a {d}x{d} matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def field(self) -> str:
        return field_of(self.matrix)

    def __call__(self, u):
        return self.matrix @ np.asarray(u)

    def __add__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.space, self.matrix + other.matrix)

    def __mul__(self, alpha) -> "LinearMap":
        return LinearMap(self.space, self.matrix * alpha)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class Functional:
    """u -> sum_i coefficients[i] u[i] (plain coordinate pairing, no conjugation)."""

    space: NormedSpace
    coefficients: np.ndarray

    def __post_init__(self):
        c = _as_values(self.coefficients)
        if c.shape != (self.space.dimension,):
            raise ShapeError(f"expected {self.space.dimension} coefficients, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)

    def __call__(self, u):
        return np.dot(self.coefficients, np.asarray(u))


# ---------------------------------------------------------------------------
# dual norms
# ---------------------------------------------------------------------------

def dual_is_exact(space: NormedSpace) -> bool:
    return space.kind != "custom"


def dual_norms(space: NormedSpace, C, seed: int = 0, samples: int = 4096) -> np.ndarray:
    """Dual norms of the rows of ``C`` (closed form for lp kinds)."""
    C = np.atleast_2d(np.asarray(C))
    a = np.abs(C)
    if space.kind == "custom":
        return np.array([_dual_sampled(space, row, seed, samples) for row in C])
    p = space.p
    if space.kind == "lp":
        if p < 1:
            return a.max(axis=1)
        return np.atleast_1d(lp_norm(a, np.ones(space.dimension), conjugate(p)))
    om = space.weights
    if p < 1:
        return (a * om[None, :] ** (-1.0 / p)).max(axis=1)
    if p == INF:
        return a.sum(axis=1)
    return np.atleast_1d(lp_norm(a / om[None, :], om, conjugate(p)))


def dual_norm(lam: Functional, seed: int = 0, samples: int = 4096) -> float:
    """sup |lambda(u)| over the unit ball of W.

    Exact for lp and weighted lp spaces; for custom norms a sampled
    lower estimate refined by local search (see :func:`dual_is_exact`).
    """
    return float(dual_norms(lam.space, lam.coefficients[None, :], seed, samples)[0])


def _dual_sampled(space: NormedSpace, c: np.ndarray, seed: int, samples: int) -> float:
    if not np.any(c != 0):
        return 0.0
    rng = np.random.default_rng(seed)
    d = space.dimension
    cplx = np.iscomplexobj(c)
    G = rng.standard_normal((samples, d))
    if cplx:
        G = G + 1j * rng.standard_normal((samples, d))
    gamma = np.exp(rng.uniform(-1.5, 1.5, size=(samples, 1)))
    G = G * np.abs(G) ** (gamma - 1)
    U = np.concatenate([np.eye(d), -np.eye(d), np.conj(c)[None, :], G])
    vals = np.abs(U @ c) / np.maximum(space.norms(U), 1e-300)
    i = int(np.argmax(vals))
    best, u = float(vals[i]), U[i]
    step = 0.5
    for _ in range(400):
        trial = u + step * np.linalg.norm(u) * rng.standard_normal(d)
        nt = space.norm(trial)
        if nt > 0:
            val = abs(np.dot(c, trial)) / nt
            if val > best:
                best, u = val, trial
                step *= 1.3
                continue
        step *= 0.8
        if step < 1e-10:
            break
    return best


# ---------------------------------------------------------------------------
# rank-one representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RankOneRepresentation:
    """Terms c_l * lambda_l(.) w_l stored as arrays.

    ``functionals`` and ``vectors`` are ``(m, dim)``; row l of each belongs
    to term l.
    """

    space: NormedSpace
    coefficients: np.ndarray
    functionals: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        d = self.space.dimension
        c = _as_values(np.atleast_1d(self.coefficients))
        lam = _as_values(np.asarray(self.functionals).reshape(-1, d))
        vec = _as_values(np.asarray(self.vectors).reshape(-1, d))
        if not (c.shape[0] == lam.shape[0] == vec.shape[0]):
            raise ShapeError("coefficient, functional and vector counts differ")
        for name, val in (("coefficients", c), ("functionals", lam), ("vectors", vec)):
            object.__setattr__(self, name, val)

    @classmethod
    def empty(cls, space: NormedSpace) -> "RankOneRepresentation":
        d = space.dimension
        return cls(space, np.zeros(0), np.zeros((0, d)), np.zeros((0, d)))

    @classmethod
    def from_terms(cls, space: NormedSpace, terms: Sequence) -> "RankOneRepresentation":
        """Build from ``(c, functional, vector)`` triples."""
        if not terms:
            return cls.empty(space)
        cs, lams, ws = zip(*terms)
        lams = [getattr(l, "coefficients", l) for l in lams]
        return cls(space, np.array(cs), np.array(lams), np.array(ws))

    def __len__(self) -> int:
        return self.coefficients.shape[0]

    @property
    def terms(self) -> list:
        return [
            (self.coefficients[i], Functional(self.space, self.functionals[i]), self.vectors[i])
            for i in range(len(self))
        ]

    def p_sum(self, p: float) -> float:
        """(sum |c_l|^p)^(1/p); zero for an empty representation."""
        a = np.abs(self.coefficients)
        if a.size == 0:
            return 0.0
        return float(np.sum(a ** p) ** (1.0 / p))

    def admissibility(self) -> tuple[np.ndarray, np.ndarray]:
        return dual_norms(self.space, self.functionals), self.space.norms(self.vectors)

    def check_admissible(self, tol: float = ADMISSIBLE_TOL) -> None:
        if len(self) == 0:
            return
        duals, norms = self.admissibility()
        for i, (dn, vn) in enumerate(zip(duals, norms)):
            if dn > 1 + tol:
                raise PreconditionError(f"term {i}: functional has dual norm {dn} > 1")
            if vn > 1 + tol:
                raise PreconditionError(f"term {i}: vector has norm {vn} > 1")

    def concat(self, other: "RankOneRepresentation") -> "RankOneRepresentation":
        return RankOneRepresentation(
            self.space,
            np.concatenate([self.coefficients, other.coefficients]),
            np.concatenate([self.functionals, other.functionals]),
            np.concatenate([self.vectors, other.vectors]),
        )

    def scaled(self, alpha) -> "RankOneRepresentation":
        return RankOneRepresentation(self.space, self.coefficients * alpha, self.functionals, self.vectors)


def assemble(rep: RankOneRepresentation) -> LinearMap:
    """Matrix of u -> sum_l c_l lambda_l(u) w_l."""
    rep.check_admissible()
    d = rep.space.dimension
    if len(rep) == 0:
        return LinearMap(rep.space, np.zeros((d, d)))
    # per-term outer products, so that opposite terms cancel exactly
    terms = rep.coefficients[:, None, None] * rep.vectors[:, :, None] * rep.functionals[:, None, :]
    return LinearMap(rep.space, terms.sum(axis=0))


def _normalized(space, coeffs, lams, vecs) -> RankOneRepresentation:
    """Rescale every factor to unit size, folding the scale into c; drop zero terms."""
    dn = dual_norms(space, lams)
    vn = space.norms(vecs) if len(vecs) else np.zeros(0)
    c = coeffs * dn * vn
    keep = (dn > 0) & (vn > 0) & (np.abs(c) > 0)
    lams = lams[keep] / dn[keep][:, None]
    vecs = vecs[keep] / vn[keep][:, None]
    return RankOneRepresentation(space, c[keep], lams, vecs)


def canonical_representation(A: LinearMap) -> RankOneRepresentation:
    """One term per nonzero entry: A_ij * e_j^*(.) e_i, rescaled to unit factors."""
    d = A.space.dimension
    I = np.eye(d)
    idx = np.argwhere(A.matrix != 0)
    if idx.size == 0:
        return RankOneRepresentation.empty(A.space)
    return _normalized(A.space, A.matrix[idx[:, 0], idx[:, 1]], I[idx[:, 1]], I[idx[:, 0]])


def _columns_representation(A: LinearMap) -> RankOneRepresentation:
    d = A.space.dimension
    return _normalized(A.space, np.ones(d), np.eye(d), A.matrix.T.copy())


def _rows_representation(A: LinearMap) -> RankOneRepresentation:
    d = A.space.dimension
    return _normalized(A.space, np.ones(d), A.matrix.copy(), np.eye(d))


def _balance(space: NormedSpace) -> Optional[np.ndarray]:
    """Diagonal S with ||u||_W = ||S u||_2 when W is Euclidean, else None."""
    if not space.is_euclidean:
        return None
    if space.kind == "weighted_lp":
        return np.sqrt(space.weights)
    return np.ones(space.dimension)


def _spectral_representation(A: LinearMap) -> RankOneRepresentation:
    """Terms from an SVD, in balanced coordinates when W is a weighted 2-norm."""
    S = _balance(A.space)
    root = S if S is not None else np.ones(A.space.dimension)
    B = root[:, None] * A.matrix / root[None, :]
    U, sv, Vh = np.linalg.svd(B)
    # singular values at rounding level are noise; under p < 1 they would dominate
    keep = sv > (sv[0] * B.shape[0] * np.finfo(float).eps if sv.size else 0)
    vecs = (U[:, keep] / root[:, None]).T
    lams = Vh[keep] * root[None, :]
    if S is not None:
        return RankOneRepresentation(A.space, sv[keep], lams, vecs)
    return _normalized(A.space, sv[keep], lams, vecs)


def _basis_objective(M, space, B, p):
    try:
        Binv = np.linalg.inv(B)
    except np.linalg.LinAlgError:
        return np.inf
    c = space.norms((M @ B).T) * dual_norms(space, Binv)
    return float(np.sum(c ** p))


def _basis_representation(M, space, B) -> RankOneRepresentation:
    Binv = np.linalg.inv(B)
    d = space.dimension
    return _normalized(space, np.ones(d), Binv, (M @ B).T.copy())


def _local_search(M, space, B0, p, iters, rng):
    """Hill-climb on the basis B of A = sum_k (A B)[:, k] (B^-1)[k, :]."""
    B = B0.copy()
    best = _basis_objective(M, space, B, p)
    step = 0.1
    d = space.dimension
    for _ in range(iters):
        G = rng.standard_normal((d, d))
        if np.iscomplexobj(M):
            G = G + 1j * rng.standard_normal((d, d))
        trial = B + step * G * np.abs(B).max()
        val = _basis_objective(M, space, trial, p)
        if val < best:
            B, best = trial, val
            step = min(step * 1.5, 1.0)
        else:
            step *= 0.85
            if step < 1e-8:
                break
        # keep the basis well scaled
        B = B / np.linalg.norm(B, axis=0, keepdims=True)
    return B, best


@dataclass(frozen=True)
class QuasinormEstimate:
    value: float
    p: float
    representation: RankOneRepresentation
    kind: str
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .serialization import to_jsonable

        rep = self.representation
        return to_jsonable(
            {
                "value": self.value,
                "p": self.p,
                "kind": self.kind,
                "space": rep.space.describe() if rep.space.kind != "custom" else {"kind": "custom"},
                "representation": {
                    "coefficients": rep.coefficients,
                    "functionals": rep.functionals,
                    "vectors": rep.vectors,
                },
                "details": self.details,
            }
        )


def candidate_representations(A: LinearMap, p: float, restarts: int = 4, iters: int = 150, seed: int = 0):
    """All representations tried by :func:`trace_quasinorm`, in a fixed order."""
    scale = float(np.abs(A.matrix).max())
    if scale == 0:
        return [("zero", RankOneRepresentation.empty(A.space))]
    An = LinearMap(A.space, A.matrix / scale)
    pool = [
        ("canonical", canonical_representation(An)),
        ("columns", _columns_representation(An)),
        ("rows", _rows_representation(An)),
        ("spectral", _spectral_representation(An)),
    ]
    if _balance(A.space) is None and A.space.dimension > 1:
        M = An.matrix
        d = A.space.dimension
        _, _, Vh = np.linalg.svd(M)
        starts = [np.eye(d), np.conj(Vh.T)]
        children = np.random.SeedSequence(seed).spawn(max(0, restarts))
        for child in children:
            rng = np.random.default_rng(child)
            starts.append(rng.standard_normal((d, d)))
        for k, B0 in enumerate(starts):
            rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
            B, val = _local_search(M, A.space, B0.astype(M.dtype if np.iscomplexobj(M) else float), p, iters, rng)
            if np.isfinite(val):
                pool.append((f"basis_search_{k}", _basis_representation(M, A.space, B)))
    return [(name, rep.scaled(scale)) for name, rep in pool]


def trace_quasinorm(A: LinearMap, p=1.0, restarts: int = 4, iters: int = 150, seed: int = 0) -> QuasinormEstimate:
    """Smallest (sum |c|^p)^(1/p) over the representations that were tried.

    For a Euclidean W and p = 1 the singular value representation is optimal
    (``kind='exact_euclidean'``).  Otherwise the result is an upper bound.
    """
    p = as_exponent(p)
    if p > 1:
        raise UsageError(f"trace quasinorm needs 0 < p <= 1, got {p}")
    pool = candidate_representations(A, p, restarts, iters, seed)
    best_name, best = pool[0]
    best_val = best.p_sum(p)
    for name, rep in pool[1:]:
        v = rep.p_sum(p)
        if v < best_val:
            best_name, best, best_val = name, rep, v
    euclid = _balance(A.space) is not None
    if euclid and p == 1:
        best_name, best = next((n, r) for n, r in pool if n in ("spectral", "zero"))
        best_val = best.p_sum(p)
        kind = "exact_euclidean"
    else:
        kind = "upper_bound"
    canonical_val = pool[0][1].p_sum(p)
    details = {"source": best_name, "tried": len(pool), "canonical_value": canonical_val, "terms": len(best)}
    return QuasinormEstimate(best_val, p, best, kind, details)


def operator_norm_on(space: NormedSpace, B: np.ndarray) -> float:
    """(W -> W) operator norm for lp spaces with p in {1, 2, inf} and weighted 2-norms."""
    B = np.asarray(B)
    S = _balance(space)
    if S is not None:
        return float(np.linalg.norm(S[:, None] * B / S[None, :], 2))
    if space.kind == "lp" and space.p == 1:
        return float(np.abs(B).sum(axis=0).max())
    if space.kind == "lp" and space.p == INF:
        return float(np.abs(B).sum(axis=1).max())
    raise UsageError("operator norm on W is only available for p in {1, 2, inf}")


def duality_lower_bound(A: LinearMap, B: np.ndarray) -> float:
    """|trace(B A)| / ||B||_(W->W), a lower bound for the trace norm of A."""
    nb = operator_norm_on(A.space, B)
    if nb == 0:
        return 0.0
    return float(abs(np.trace(np.asarray(B) @ A.matrix)) / nb)


# ---------------------------------------------------------------------------
# property report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuasinormReport:
    values: dict
    monotone: bool
    trace_norm_below: bool
    subadditivity: list
    min_subadditivity_slack: float
    ok: bool

    def to_dict(self) -> dict:
        from .serialization import to_jsonable

        return to_jsonable({**self.__dict__, "values": {str(k): v for k, v in self.values.items()}})


def _pooled(A: LinearMap, ps, seed, restarts, iters):
    reps = []
    for p in ps:
        reps.extend(rep for _, rep in candidate_representations(A, p, restarts, iters, seed))
    return {p: min(rep.p_sum(p) for rep in reps) for p in ps}, reps


def quasinorm_properties_check(
    A: LinearMap, p_list=(1.0, 0.75, 0.5, 0.25), seed: int = 0, others=None, pairs: int = 2, restarts: int = 2, iters: int = 60
) -> QuasinormReport:
    """Monotonicity in p, the trace norm as a floor, and p-power subadditivity.

    Estimates for every p are taken as the best value over all
    representations found for any p in the list.  For a pair (A, B) the
    bound on A + B is the better of its own estimate and the concatenated
    representations of A and B.
    """
    ps = sorted({float(p) for p in p_list} | {1.0}, reverse=True)
    if any(not 0 < p <= 1 for p in ps):
        raise DomainError("p values must lie in (0, 1]")
    values, reps_a = _pooled(A, ps, seed, restarts, iters)
    tol = EQ_TOL
    monotone = all(values[b] >= values[a] * (1 - tol) - tol for a, b in zip(ps, ps[1:]))
    floor = values[1.0]
    below = all(v >= floor * (1 - tol) - tol for v in values.values())

    rng = np.random.default_rng(seed)
    if others is None:
        d = A.space.dimension
        others = []
        for _ in range(pairs):
            M = rng.standard_normal((d, d))
            if A.field == "complex":
                M = M + 1j * rng.standard_normal((d, d))
            others.append(LinearMap(A.space, M))
    rows = []
    for B in others:
        vb, reps_b = _pooled(B, ps, seed, restarts, iters)
        vs, _ = _pooled(A + B, ps, seed, restarts, iters)
        for p in ps:
            ra = min(reps_a, key=lambda r: r.p_sum(p))
            rb = min(reps_b, key=lambda r: r.p_sum(p))
            concat = ra.concat(rb).p_sum(p)
            lhs = min(vs[p], concat) ** p
            rhs = values[p] ** p + vb[p] ** p
            rows.append({"p": p, "lhs": lhs, "rhs": rhs, "slack": rhs - lhs, "independent_lhs": vs[p] ** p})
    min_slack = min((r["slack"] / max(1.0, r["rhs"]) for r in rows), default=0.0)
    ok = monotone and below and min_slack >= -tol
    return QuasinormReport({p: values[p] for p in ps}, monotone, below, rows, float(min_slack), ok)
