"""Weighted p-norms, exponent arithmetic, certificates and norm classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import _kernels
from .errors import DomainError, PreconditionError, ShapeError, UsageError
from .space import ScalarFunction, VectorFunction, WeightedSet, _frozen

INF = math.inf
EQ_TOL = 1e-9


# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------

def as_exponent(p) -> float:
    """Parse an exponent: a positive real or infinity ("inf" is accepted)."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "+inf", "∞"):
            return INF
        try:
            p = float(s)
        except ValueError:
            raise DomainError(f"not an exponent: {p!r}") from None
    p = float(p)
    if math.isnan(p) or p <= 0:
        raise DomainError(f"exponents must be positive, got {p}")
    return p


def recip(p: float) -> float:
    """1/p with the convention 1/inf = 0."""
    return 0.0 if p == INF else 1.0 / p


def from_recip(x: float) -> float:
    """Inverse of :func:`recip`; 0 maps to infinity."""
    if x < 0:
        raise UsageError("exponent relation gives a negative reciprocal")
    return INF if x == 0 else 1.0 / x


def conjugate(p) -> float:
    """The exponent q with 1/p + 1/q = 1."""
    p = as_exponent(p)
    if p < 1:
        raise DomainError(f"conjugate exponent needs p >= 1, got {p}")
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1.0)


def harmonic_sum(*ps: float) -> float:
    """r with 1/r = sum 1/p_i."""
    return from_recip(sum(recip(as_exponent(p)) for p in ps))


def exponents_close(a: float, b: float, tol: float = EQ_TOL) -> bool:
    return abs(recip(a) - recip(b)) <= tol * max(1.0, recip(a), recip(b))


def exponent_json(p: float):
    return "inf" if p == INF else p


# ---------------------------------------------------------------------------
# weighted norms on raw arrays
# ---------------------------------------------------------------------------

def power_sum(absvals, weights, p: float):
    """sum |v|^p w along the last axis (batched)."""
    a = np.atleast_2d(absvals)
    w = np.broadcast_to(weights, a.shape)
    out = _kernels.power_sums(a, w, p)
    return out if np.ndim(absvals) > 1 else float(out[0])


def _scaled_norms(a: np.ndarray, w: np.ndarray, p) -> np.ndarray:
    """Row norms for finite p, computed as m * (sum (|v|/m)^p w)^(1/p) with m = max |v|.

    Dividing by the row maximum keeps |v|^p inside double range for large p.
    """
    m = a.max(axis=-1)
    nz = m > 0
    scale = np.where(nz, m, 1.0)
    s = _kernels.power_sums(a / scale[:, None], w, p)
    return np.where(nz, scale * np.power(s, 1.0 / np.asarray(p)), 0.0)


def lp_norm(values, weights, p: float):
    """Weighted p-norm along the last axis; weights are ignored for p = inf."""
    a = np.abs(values)
    if p == INF:
        m = a.max(axis=-1)
        return m if np.ndim(m) else float(m)
    a2 = np.atleast_2d(a)
    out = _scaled_norms(a2, np.broadcast_to(weights, a2.shape), p)
    return out if a.ndim > 1 else float(out[0])


def batch_lp_norm(values, weights, p) -> np.ndarray:
    """Row-wise weighted norms with one exponent per row (inf allowed)."""
    a = np.abs(values)
    p = np.broadcast_to(np.asarray(p, dtype=float), a.shape[:1])
    w = np.broadcast_to(weights, a.shape)
    inf = np.isinf(p)
    out = _scaled_norms(a, w, np.where(inf, 1.0, p))
    if inf.any():
        out[inf] = a[inf].max(axis=-1)
    return out


def weighted_norm(f: ScalarFunction, p) -> float:
    """(sum_x |f(x)|^p w(x))^(1/p), or max |f| for p = inf."""
    return float(lp_norm(f.values, f.domain.weights, as_exponent(p)))


def vector_norm(F: VectorFunction, p) -> float:
    """Weighted p-norm of x -> ||F(x)||_V."""
    return weighted_norm(pointwise_norms(F), p)


def pointwise_norms(F: VectorFunction) -> ScalarFunction:
    return ScalarFunction(F.domain, F.space.norms(F.values))


# ---------------------------------------------------------------------------
# normed spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormedSpace:
    """A finite-dimensional space with a norm or quasinorm evaluator.

    ``kind`` is ``"lp"``, ``"weighted_lp"`` or ``"custom"``.  For the custom
    kind ``evaluator`` maps a 1-d coordinate vector to a nonnegative float.
    """

    dimension: int
    kind: str = "lp"
    p: float = 2.0
    weights: Optional[np.ndarray] = None
    evaluator: Optional[Callable[[np.ndarray], float]] = None
    declared_subadditivity: Optional[float] = None
    declared_quasinorm_constant: Optional[float] = None
    index_set: Optional[WeightedSet] = None
    name: str = ""

    def __post_init__(self):
        if int(self.dimension) < 1:
            raise DomainError("dimension must be positive")
        object.__setattr__(self, "dimension", int(self.dimension))
        if self.kind not in ("lp", "weighted_lp", "custom"):
            raise DomainError(f"unknown norm kind {self.kind!r}")
        if self.kind == "custom":
            if self.evaluator is None:
                raise DomainError("custom norms need an evaluator")
        else:
            object.__setattr__(self, "p", as_exponent(self.p))
        if self.kind == "weighted_lp":
            w = _frozen(self.weights, np.float64)
            if w.shape != (self.dimension,) or np.any(w <= 0):
                raise DomainError("weighted_lp needs one positive weight per coordinate")
            object.__setattr__(self, "weights", w)
        ds = self.declared_subadditivity
        if ds is not None and not 0 < ds <= 1:
            raise DomainError("declared subadditivity exponent must lie in (0, 1]")
        qc = self.declared_quasinorm_constant
        if qc is not None and qc < 1:
            raise DomainError("declared quasinorm constant must be >= 1")

    @classmethod
    def lp(cls, p, dimension: int) -> "NormedSpace":
        p = as_exponent(p)
        return cls(dimension, "lp", p, declared_subadditivity=min(p, 1.0))

    @classmethod
    def weighted_lp(cls, p, weights, index_set=None) -> "NormedSpace":
        p = as_exponent(p)
        w = np.asarray(weights, dtype=float)
        return cls(w.size, "weighted_lp", p, w, declared_subadditivity=min(p, 1.0), index_set=index_set)

    @classmethod
    def custom(cls, evaluator, dimension: int, **kw) -> "NormedSpace":
        return cls(dimension, "custom", evaluator=evaluator, **kw)

    @classmethod
    def scalars(cls) -> "NormedSpace":
        """The scalar field with the absolute value."""
        return cls.lp(1.0, 1)

    @property
    def is_euclidean(self) -> bool:
        return self.kind != "custom" and self.p == 2.0

    @property
    def is_norm_kind(self) -> bool:
        """True when the evaluator is known to satisfy the triangle inequality."""
        if self.kind == "custom":
            return self.declared_subadditivity == 1.0
        return self.p >= 1

    def norm(self, v) -> float:
        v = np.asarray(v)
        if v.shape != (self.dimension,):
            raise ShapeError(f"expected a vector of length {self.dimension}, got shape {v.shape}")
        if self.kind == "custom":
            return float(self.evaluator(v))
        return float(self.norms(v[None, :])[0])

    def norms(self, V) -> np.ndarray:
        """Row-wise norms of an ``(m, dimension)`` array."""
        V = np.asarray(V)
        if V.ndim != 2 or V.shape[1] != self.dimension:
            raise ShapeError(f"expected rows of length {self.dimension}, got shape {V.shape}")
        if self.kind == "custom":
            return np.array([float(self.evaluator(row)) for row in V])
        w = self.weights if self.kind == "weighted_lp" else np.ones(self.dimension)
        return np.atleast_1d(lp_norm(V, w, self.p))

    def describe(self) -> dict:
        d = {"kind": self.kind, "dimension": self.dimension}
        if self.kind != "custom":
            d["p"] = exponent_json(self.p)
        if self.kind == "weighted_lp":
            d["weights"] = self.weights.tolist()
        if self.name:
            d["name"] = self.name
        return d


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

def equality_tol(rhs: float, rel: float = EQ_TOL) -> float:
    return rel * max(1.0, abs(rhs))


def status_of(lhs: float, rhs: float, rel: float = EQ_TOL) -> str:
    slack = rhs - lhs
    tol = equality_tol(rhs, rel)
    if abs(slack) <= tol:
        return "equality"
    if slack < -tol:
        return "violated"
    return "holds"


_RANK = {"violated": 3, "holds": 1, "equality": 0, "not_applicable": 2}


@dataclass(frozen=True)
class Certificate:
    """An evaluated comparison lhs <= rhs.

    ``parts`` holds sub-comparisons (for example the two relations of a
    monotonicity check); ``details`` carries operation-specific numbers.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    status: str
    witness: Any = None
    details: dict = field(default_factory=dict)
    parts: tuple = ()

    @property
    def ok(self) -> bool:
        return self.status in ("holds", "equality", "not_applicable")

    @property
    def rel_slack(self) -> float:
        return self.slack / max(1.0, abs(self.rhs))


def certify(name, lhs, rhs, witness=None, details=None, parts=(), rel=EQ_TOL, status=None) -> Certificate:
    lhs = float(lhs)
    rhs = float(rhs)
    st = status_of(lhs, rhs, rel) if status is None else status
    if parts and status is None:
        worst = max([st] + [p.status for p in parts], key=_RANK.__getitem__)
        st = worst if worst != "not_applicable" else st
    return Certificate(name, lhs, rhs, rhs - lhs, st, witness, dict(details or {}), tuple(parts))


# ---------------------------------------------------------------------------
# monotonicity and Jensen
# ---------------------------------------------------------------------------

def monotonicity_certificate(f: ScalarFunction, p, q) -> Certificate:
    """Compare norms of one function at two exponents p <= q.

    Unit weights: ||f||_q <= ||f||_p and ||f||_inf <= ||f||_p.
    Probability weights: ||f||_{w,p} <= ||f||_{w,q} and ||f||_{w,p} <= ||f||_inf.
    Any other weight yields status ``not_applicable``.
    """
    p, q = as_exponent(p), as_exponent(q)
    if p > q:
        raise UsageError(f"monotonicity needs p <= q, got p={p}, q={q}")
    np_, nq, ninf = weighted_norm(f, p), weighted_norm(f, q), weighted_norm(f, INF)
    details = {"p": exponent_json(p), "q": exponent_json(q), "norm_p": np_, "norm_q": nq, "norm_inf": ninf}
    parts = []
    if f.domain.is_unit():
        parts.append(certify("unit_decreasing", nq, np_))
        parts.append(certify("unit_sup_below", ninf, np_))
    if f.domain.is_probability():
        parts.append(certify("probability_increasing", np_, nq))
        parts.append(certify("probability_sup_above", np_, ninf))
    if not parts:
        return certify("monotonicity", np_, nq, details=details, status="not_applicable")
    return certify("monotonicity", parts[0].lhs, parts[0].rhs, details=details, parts=parts)


def jensen_power_certificate(phi: ScalarFunction, r: float) -> Certificate:
    """(sum phi w)^r <= sum phi^r w under a probability weight, r >= 1."""
    r = float(r)
    if r < 1:
        raise UsageError(f"Jensen power bound needs r >= 1, got {r}")
    if not phi.domain.is_probability():
        raise PreconditionError("Jensen power bound needs a probability weight")
    if phi.field != "real" or np.any(phi.values < 0):
        raise DomainError("phi must be real and nonnegative")
    w = phi.domain.weights
    mean = float(np.sum(phi.values * w))
    lhs = mean ** r
    rhs = power_sum(phi.values, w, r)
    return certify("jensen", lhs, rhs, details={"r": r})


# ---------------------------------------------------------------------------
# sampled classification
# ---------------------------------------------------------------------------

P_GRID = np.arange(1, 101) / 100.0


def sample_pairs(dimension: int, trials: int, rng, complex_field=False):
    """Probe pairs (v, w): signed basis pairs, colinear pairs, then random ones."""
    eye = np.eye(dimension)
    vs, ws = [], []
    for i in range(dimension):
        for j in range(dimension):
            for s in (1.0, -1.0):
                vs.append(eye[i])
                ws.append(s * eye[j])
    n_rand = max(int(trials), 1)
    shape = (n_rand, dimension)

    def draw():
        g = rng.standard_normal(shape)
        if complex_field:
            g = g + 1j * rng.standard_normal(shape)
        # sharpen a random share of rows toward sparse vectors
        gamma = np.exp(rng.uniform(-1.5, 2.5, size=(n_rand, 1)))
        return np.abs(g) ** gamma * np.exp(1j * np.angle(g)) if complex_field else np.sign(g) * np.abs(g) ** gamma

    V = draw()
    W = draw()
    colinear = rng.uniform(0, 3, size=(n_rand // 4, 1)) * V[: n_rand // 4]
    W[: n_rand // 4] = colinear
    V = np.concatenate([np.array(vs), V])
    W = np.concatenate([np.array(ws), W])
    return V, W


@dataclass(frozen=True)
class NormClassification:
    kind: str
    p: Optional[float]
    constant: float
    triangle_held: bool
    convexity_held: bool
    trials: int
    seed: int
    conclusive: bool = False
    witness: Any = None
    notes: tuple = ()

    def to_dict(self) -> dict:
        from .serialization import to_jsonable

        return to_jsonable(self.__dict__)


def _largest_p(nv, nw, ns, rel=EQ_TOL) -> Optional[float]:
    ok = None
    for p in P_GRID:
        lhs = ns ** p
        rhs = nv ** p + nw ** p
        if np.all(lhs <= rhs * (1 + rel) + 1e-300):
            ok = float(p)
    # validity is downward closed in p, so the largest passing grid point suffices
    return ok


def classify_norm(N: NormedSpace, trials: int = 2000, seed: int = 0, complex_field: bool = False) -> NormClassification:
    """Sample-based evidence for the triangle, p-power and quasinorm inequalities.

    Sampling can refute a property or support it; a supported property is
    never reported as proved (``conclusive`` stays False unless refuted).
    """
    if trials < 1:
        raise UsageError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    d = N.dimension
    V, W = sample_pairs(d, trials, rng, complex_field)
    nv, nw, ns = N.norms(V), N.norms(W), N.norms(V + W)
    notes = []

    def violated(why, v, w=None):
        wit = {"v": v, "w": w} if w is not None else {"v": v}
        return NormClassification("violated", None, float("nan"), False, False, trials, seed, True, wit, tuple(notes + [why]))

    if N.norm(np.zeros(d)) != 0:
        return violated("norm of the zero vector is nonzero", np.zeros(d))
    bad = np.flatnonzero(nv <= 0)
    if bad.size:
        return violated("nonzero vector with zero norm", V[bad[0]])
    alphas = rng.uniform(-4, 4, size=nv.size)
    if complex_field:
        alphas = alphas * np.exp(1j * rng.uniform(0, 2 * np.pi, size=nv.size))
    nav = N.norms(alphas[:, None] * V)
    bad = np.flatnonzero(np.abs(nav - np.abs(alphas) * nv) > 1e-9 * np.maximum(1.0, nav))
    if bad.size:
        return violated("absolute homogeneity fails", V[bad[0]], alphas[bad[0]])

    ratio = ns / (nv + nw)
    C = float(ratio.max())
    triangle = bool(np.all(ratio <= 1 + EQ_TOL))
    p_max = _largest_p(nv, nw, ns)

    ds = N.declared_subadditivity
    if ds is not None:
        lhs, rhs = ns ** ds, nv ** ds + nw ** ds
        bad = np.flatnonzero(lhs > rhs * (1 + EQ_TOL))
        if bad.size:
            i = bad[np.argmax((lhs - rhs)[bad])]
            return violated(f"declared {ds}-subadditivity fails", V[i], W[i])
    qc = N.declared_quasinorm_constant
    if qc is not None and C > qc * (1 + EQ_TOL):
        i = int(np.argmax(ratio))
        return violated(f"declared quasinorm constant {qc} exceeded", V[i], W[i])

    # unit-ball convexity probe: midpoints of points inside the ball
    U1 = V / nv[:, None] * rng.uniform(0, 1, size=(nv.size, 1))
    U2 = W / nw[:, None] * rng.uniform(0, 1, size=(nw.size, 1))
    mid = N.norms((U1 + U2) / 2)
    convex = bool(np.all(mid <= 1 + EQ_TOL))
    if triangle and not convex:
        i = int(np.argmax(mid))
        return violated("triangle inequality held but the unit ball is not convex", U1[i], U2[i])

    if triangle:
        kind = "norm"
    elif p_max is not None:
        kind = "p_subadditive"
    else:
        kind = "quasinorm"
    if not triangle:
        notes.append("triangle inequality refuted on samples")
    return NormClassification(kind, p_max, C, triangle, convex, int(trials), int(seed), not triangle, None, tuple(notes))


def subadditivity_descends(N: NormedSpace, p: float, q: float, samples=None, trials: int = 2000, seed: int = 0) -> Certificate:
    """Check ||v+w||^q <= ||v||^q + ||w||^q for q <= p on sampled pairs.

    ``samples`` may be an explicit ``(V, W)`` pair of ``(m, dim)`` arrays.
    The certificate reports the pair with the smallest relative slack.
    """
    p, q = float(p), float(q)
    if not 0 < p <= 1:
        raise DomainError(f"p must lie in (0, 1], got {p}")
    if not 0 < q:
        raise DomainError(f"q must be positive, got {q}")
    if q > p:
        raise UsageError(f"need q <= p, got q={q}, p={p}")
    ds = N.declared_subadditivity
    if ds is None or ds < p - EQ_TOL:
        raise PreconditionError(f"space is not declared {p}-subadditive (declared: {ds})")
    if samples is None:
        V, W = sample_pairs(N.dimension, trials, np.random.default_rng(seed))
    else:
        V, W = (np.atleast_2d(np.asarray(s)) for s in samples)
    lhs = N.norms(V + W) ** q
    rhs = N.norms(V) ** q + N.norms(W) ** q
    rel = (rhs - lhs) / np.maximum(1.0, rhs)
    i = int(np.argmin(rel))
    return certify(
        "subadditivity_descends",
        lhs[i],
        rhs[i],
        witness={"v": V[i], "w": W[i]},
        details={"p": p, "q": q, "samples": int(lhs.size)},
    )
