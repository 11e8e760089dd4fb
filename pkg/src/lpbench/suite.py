"""Seeded property suite over the whole corpus.

The nine scalar inequalities run vectorized over padded batches (padding
entries carry zero value and zero weight, so they drop out of every sum and
max).  Every other property draws JSON payloads and evaluates them through
:mod:`lpbench.checks`, so any reported instance replays verbatim with
``lpbench check``.
"""
from __future__ import annotations

import time
import zlib
from dataclasses import asdict, dataclass
from dataclasses import field as dc_field
from typing import Callable, Optional

import numpy as np

from . import checks
from ._version import __version__
from .errors import UsageError
from .inequalities import LITERAL_COUNTEREXAMPLE
from .norms import EQ_TOL, INF, batch_lp_norm, conjugate, exponent_json, lp_norm
from .operators import KernelOperator, operator_norm
from .space import WeightedSet
from .serialization import to_jsonable

WEIGHT_MODES = ("unit", "probability", "random", "mixed")
FIELDS = ("real", "complex", "both")
DEFAULT_POOL = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, INF)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 42
    trials: int = 200
    n_range: tuple = (1, 16)
    field: str = "both"
    weight_mode: str = "mixed"
    exponent_pool: tuple = DEFAULT_POOL
    tolerances: dict = dc_field(default_factory=dict)
    paper_literal_interpolation: bool = False
    properties: Optional[tuple] = None

    def __post_init__(self):
        lo, hi = self.n_range
        if int(self.trials) < 1:
            raise UsageError(f"trials must be >= 1, got {self.trials}")
        if not 1 <= lo <= hi:
            raise UsageError(f"n_range must satisfy 1 <= min <= max, got {self.n_range}")
        if self.field not in FIELDS:
            raise UsageError(f"field must be one of {FIELDS}, got {self.field!r}")
        if self.weight_mode not in WEIGHT_MODES:
            raise UsageError(f"weight_mode must be one of {WEIGHT_MODES}, got {self.weight_mode!r}")
        if not self.exponent_pool or any(not (p > 0) for p in self.exponent_pool):
            raise UsageError("exponent_pool must be a nonempty list of positive exponents")
        if self.properties is not None:
            unknown = set(self.properties) - set(property_names())
            if unknown:
                raise UsageError(f"unknown properties: {', '.join(sorted(unknown))}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["n_range"] = list(self.n_range)
        d["exponent_pool"] = [exponent_json(p) for p in self.exponent_pool]
        d["properties"] = None if self.properties is None else list(self.properties)
        return d


@dataclass
class PropertyResult:
    name: str
    check: str
    passed: int = 0
    failed: int = 0
    not_applicable: int = 0
    min_rel_slack: float = np.inf
    min_slack_instance: Optional[dict] = None
    first_failure: Optional[dict] = None

    def to_dict(self) -> dict:
        return to_jsonable(self.__dict__)


@dataclass
class SuiteReport:
    version: str
    config: dict
    properties: list
    paper_literal_form_rejected: dict
    elapsed: float

    @property
    def failures(self) -> int:
        return sum(p.failed for p in self.properties)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "ok": self.ok,
            "failures": self.failures,
            "properties": [p.to_dict() for p in self.properties],
            "paper_literal_form_rejected": self.paper_literal_form_rejected,
            "elapsed": self.elapsed,
        }


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------

def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(zlib.crc32(name.encode()),)))


def _sizes(rng, m, lo, hi):
    n = rng.integers(lo, hi + 1, size=m)
    mask = np.arange(hi)[None, :] < n[:, None]
    return n, mask


def _weights(rng, mask, mode):
    m, n = mask.shape
    if mode == "mixed":
        modes = rng.integers(0, 3, size=m)
    else:
        modes = np.full(m, ("unit", "probability", "random").index(mode))
    w = np.exp(rng.uniform(-2, 2, size=(m, n)))
    w[modes == 0] = 1.0
    w = np.where(mask, w, 0.0)
    prob = modes == 1
    w[prob] /= w[prob].sum(axis=1, keepdims=True)
    return w


def _values(rng, mask, complex_field, positive=False):
    m, n = mask.shape
    v = rng.standard_normal((m, n))
    if complex_field:
        v = v + 1j * rng.standard_normal((m, n))
    if positive:
        v = np.abs(v)
    v *= 10.0 ** rng.uniform(-3, 3, size=(m, 1))
    v[rng.random((m, n)) < 0.1] = 0
    return np.where(mask, v, 0)


def _exponents(rng, m, lo, hi, pool, allow_inf=True, lo_open=False, hi_open=False):
    """Half pool draws in range, half log-uniform on [lo, min(hi, 16)]."""
    ok = [p for p in pool if (lo < p if lo_open else lo <= p) and (p < hi if hi_open else p <= hi) and (allow_inf or p < INF)]
    top = min(hi, 16.0)
    cont = np.exp(rng.uniform(np.log(lo), np.log(top), size=m))
    if hi_open:
        cont = np.minimum(cont, np.nextafter(hi, 0))
    if lo_open:
        cont = np.maximum(cont, np.nextafter(lo, INF))
    if not ok:
        return cont
    pick = np.asarray(ok)[rng.integers(0, len(ok), size=m)]
    return np.where(rng.random(m) < 0.5, pick, cont)


def _recip(p):
    return np.where(np.isinf(p), 0.0, 1.0 / np.where(np.isinf(p), 1.0, p))


def _from_recip(x):
    return np.where(x == 0, INF, 1.0 / np.where(x == 0, 1.0, x))


def _conj(p):
    return _from_recip(1.0 - _recip(p))


def _phase_conj(v):
    a = np.abs(v)
    return np.where(a > 0, np.conj(v) / np.where(a > 0, a, 1.0), 0)


def _witness(f, a, b):
    """conj(sgn f) |f / max|f||^(a/b) row-wise; rows with a/b infinite are left alone.

    Any positive multiple of a witness is a witness; scaling by the row max
    keeps |f|^(a/b) from overflowing when a/b is large.
    """
    e = np.where(np.isinf(a) | np.isinf(b), 0.0, np.where(np.isinf(a), 1.0, a) / np.where(np.isinf(b), 1.0, b))
    m = np.abs(f).max(axis=1, keepdims=True)
    return _phase_conj(f) * np.power(np.abs(f) / np.where(m > 0, m, 1.0), e[:, None])


def _fn_json(v, n):
    v = v[:n]
    if np.iscomplexobj(v):
        return [[float(z.real), float(z.imag)] for z in v]
    return [float(x) for x in v]


def _exp_json(p):
    return exponent_json(float(p))


# ---------------------------------------------------------------------------
# batched corpus
# ---------------------------------------------------------------------------

class Batch:
    """lhs/rhs arrays plus a payload builder for row i (rows may repeat an instance)."""

    def __init__(self, check, lhs, rhs, payload: Callable[[int], dict], row_instance=None):
        self.check = check
        self.lhs = np.asarray(lhs, dtype=float)
        self.rhs = np.asarray(rhs, dtype=float)
        self.payload = payload
        self.row_instance = np.arange(self.lhs.size) if row_instance is None else row_instance


def _inject(rng, m, frac=0.1):
    return rng.random(m) < frac


def _corpus_holder(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, mode)
    f1, f2 = _values(rng, mask, cplx), _values(rng, mask, cplx)
    p = _exponents(rng, m, 1.0, INF, pool)
    q = _conj(p)
    eq = _inject(rng, m) & np.isfinite(p) & np.isfinite(q)
    f2 = np.where(eq[:, None], _witness(f1, p, q), f2)
    lhs = np.abs(np.sum(f1 * f2 * w, axis=1))
    rhs = batch_lp_norm(f1, w, p) * batch_lp_norm(f2, w, q)
    return Batch("holder", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "f1": _fn_json(f1[i], n[i]), "f2": _fn_json(f2[i], n[i]), "p": _exp_json(p[i]), "q": _exp_json(q[i])})


def _corpus_young(rng, m, lo, hi, cplx, mode, pool):
    p = _exponents(rng, m, 1.0, INF, pool, allow_inf=False, lo_open=True)
    q = _conj(p)
    a = np.exp(rng.uniform(-3, 3, size=m))
    b = np.exp(rng.uniform(-3, 3, size=m))
    a[rng.random(m) < 0.05] = 0.0
    eq = _inject(rng, m)
    b = np.where(eq, a ** (p - 1), b)
    lhs = a * b
    with np.errstate(over="ignore"):
        rhs = a**p / p + b**q / q
    return Batch("young", lhs, rhs, lambda i: {"a": float(a[i]), "b": float(b[i]), "p": float(p[i]), "q": float(q[i])})


def _corpus_product_holder(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, mode)
    f1, f2 = _values(rng, mask, cplx), _values(rng, mask, cplx)
    p = _exponents(rng, m, 0.1, INF, pool)
    q = _exponents(rng, m, 0.1, INF, pool)
    r = _from_recip(_recip(p) + _recip(q))
    eq = _inject(rng, m) & np.isfinite(p) & np.isfinite(q)
    f2 = np.where(eq[:, None], _witness(f1, p, q), f2)
    lhs = batch_lp_norm(f1 * f2, w, r)
    rhs = batch_lp_norm(f1, w, p) * batch_lp_norm(f2, w, q)
    return Batch("product_holder", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "f1": _fn_json(f1[i], n[i]), "f2": _fn_json(f2[i], n[i]), "p": _exp_json(p[i]), "q": _exp_json(q[i])})


def _corpus_interpolation(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, mode)
    f = _values(rng, mask, cplx)
    a = _exponents(rng, m, 0.1, INF, pool)
    b = _exponents(rng, m, 0.1, INF, pool)
    p, q = np.minimum(a, b), np.maximum(a, b)
    theta = rng.random(m)
    ends = rng.random(m)
    theta = np.where(ends < 0.05, 0.0, np.where(ends > 0.95, 1.0, theta))
    # constant modulus on the support gives equality for every theta
    eq = _inject(rng, m)
    f = np.where(eq[:, None], np.where(f != 0, _phase_conj(f), 0), f)
    r = _from_recip(theta * _recip(p) + (1 - theta) * _recip(q))
    lhs = batch_lp_norm(f, w, r)
    rhs = batch_lp_norm(f, w, p) ** theta * batch_lp_norm(f, w, q) ** (1 - theta)
    return Batch("interpolation", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "f": _fn_json(f[i], n[i]), "p": _exp_json(p[i]), "q": _exp_json(q[i]), "theta": float(theta[i])})


def _corpus_minkowski(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, mode)
    f1, f2 = _values(rng, mask, cplx), _values(rng, mask, cplx)
    p = _exponents(rng, m, 1.0, INF, pool)
    eq = _inject(rng, m)
    f2 = np.where(eq[:, None], f1 * rng.uniform(0.1, 10, size=(m, 1)), f2)
    lhs = batch_lp_norm(f1 + f2, w, p)
    rhs = batch_lp_norm(f1, w, p) + batch_lp_norm(f2, w, p)
    return Batch("minkowski", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "f1": _fn_json(f1[i], n[i]), "f2": _fn_json(f2[i], n[i]), "p": _exp_json(p[i])})


def _corpus_p_power(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, mode)
    f1, f2 = _values(rng, mask, cplx), _values(rng, mask, cplx)
    p = _exponents(rng, m, 0.05, 1.0, pool, allow_inf=False)
    # disjoint supports give equality
    eq = _inject(rng, m)
    split = rng.random(f1.shape) < 0.5
    f1 = np.where(eq[:, None] & split, 0, f1)
    f2 = np.where(eq[:, None] & ~split, 0, f2)
    a1, a2, s = np.abs(f1), np.abs(f2), np.abs(f1 + f2)
    pp = lambda a: np.sum(np.power(a, p[:, None]) * w, axis=1)
    lhs, rhs = pp(s), pp(a1) + pp(a2)
    return Batch("p_power", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "f1": _fn_json(f1[i], n[i]), "f2": _fn_json(f2[i], n[i]), "p": float(p[i])})


def _monotone_batch(rng, m, lo, hi, cplx, pool, probability):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, "probability" if probability else "unit")
    f = _values(rng, mask, cplx)
    a = _exponents(rng, m, 0.1, INF, pool)
    b = _exponents(rng, m, 0.1, INF, pool)
    p, q = np.minimum(a, b), np.maximum(a, b)
    eq = _inject(rng, m)
    f = np.where(eq[:, None], np.where(mask, 2.5, 0), f)
    npn, nq = batch_lp_norm(f, w, p), batch_lp_norm(f, w, q)
    ninf = np.abs(f).max(axis=1)
    if probability:
        lhs, rhs = np.concatenate([npn, npn]), np.concatenate([nq, ninf])
    else:
        lhs, rhs = np.concatenate([nq, ninf]), np.concatenate([npn, npn])
    payload = lambda i: {"weights": _fn_json(w[i], n[i]), "f": _fn_json(f[i], n[i]), "p": _exp_json(p[i]), "q": _exp_json(q[i])}
    return Batch("monotonicity", lhs, rhs, payload, row_instance=np.tile(np.arange(m), 2))


def _corpus_mono_unit(rng, m, lo, hi, cplx, mode, pool):
    return _monotone_batch(rng, m, lo, hi, cplx, pool, probability=False)


def _corpus_mono_prob(rng, m, lo, hi, cplx, mode, pool):
    return _monotone_batch(rng, m, lo, hi, cplx, pool, probability=True)


def _corpus_jensen(rng, m, lo, hi, cplx, mode, pool):
    n, mask = _sizes(rng, m, lo, hi)
    w = _weights(rng, mask, "probability")
    phi = _values(rng, mask, False, positive=True)
    r = _exponents(rng, m, 1.0, INF, pool, allow_inf=False)
    eq = _inject(rng, m)
    phi = np.where(eq[:, None] & mask, 1.7, phi)
    lhs = np.sum(phi * w, axis=1) ** r
    rhs = np.sum(np.power(phi, r[:, None]) * w, axis=1)
    return Batch("jensen", lhs, rhs, lambda i: {"weights": _fn_json(w[i], n[i]), "phi": _fn_json(phi[i], n[i]), "r": float(r[i])})


CORPUS = {
    "holder": _corpus_holder,
    "young": _corpus_young,
    "product_holder": _corpus_product_holder,
    "interpolation": _corpus_interpolation,
    "minkowski": _corpus_minkowski,
    "p_power": _corpus_p_power,
    "monotonicity_unit": _corpus_mono_unit,
    "monotonicity_probability": _corpus_mono_prob,
    "jensen": _corpus_jensen,
}
# field and weight mode do not affect these
_FIELD_FREE = {"young", "jensen"}


def _score(batch: Batch, rel: float):
    lhs, rhs = batch.lhs, batch.rhs
    with np.errstate(invalid="ignore"):
        tol = rel * np.maximum(1.0, np.abs(rhs))
        slack = rhs - lhs
        # written so that NaN counts as a failure
        bad = ~(slack >= -tol)
        rel_slack = slack / np.maximum(1.0, np.abs(rhs))
    # an overflowed right side against a finite left side still holds
    rel_slack = np.where(np.isposinf(rhs) & np.isfinite(lhs), 1.0, rel_slack)
    return bad, np.where(np.isnan(rel_slack), -np.inf, rel_slack)


def _record(res: PropertyResult, payload, rel_slack, failed, replay=True):
    if rel_slack < res.min_rel_slack:
        res.min_rel_slack = float(rel_slack)
        res.min_slack_instance = {"check": res.check, "payload": payload, "rel_slack": float(rel_slack)}
    if failed and res.first_failure is None:
        entry = {"check": res.check, "payload": payload, "rel_slack": float(rel_slack)}
        if replay:
            entry["replay"] = to_jsonable(checks.run(res.check, payload))
        res.first_failure = entry


def run_corpus_property(name: str, seed: int, trials: int, n_range=(1, 16), fields=("real", "complex"), weight_modes=("mixed",), pool=DEFAULT_POOL, rel=EQ_TOL) -> PropertyResult:
    """Run one corpus inequality on ``trials`` instances per (field, weight mode) cell."""
    gen = CORPUS[name]
    res = PropertyResult(name, "monotonicity" if name.startswith("monotonicity") else name)
    cells = [(False, "unit")] if name in _FIELD_FREE else [(f == "complex", wm) for f in fields for wm in weight_modes]
    lo, hi = n_range
    for cplx, wm in cells:
        rng = _rng(seed, f"{name}/{'c' if cplx else 'r'}/{wm}")
        b = gen(rng, int(trials), lo, hi, cplx, wm, pool)
        bad, rel_slack = _score(b, rel)
        nbad_inst = np.unique(b.row_instance[bad]).size
        res.failed += int(nbad_inst)
        res.passed += int(trials) - int(nbad_inst)
        i = int(np.argmin(rel_slack))
        _record(res, b.payload(int(b.row_instance[i])), rel_slack[i], False)
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            _record(res, b.payload(int(b.row_instance[j])), rel_slack[j], True)
    if res.min_slack_instance is not None:
        res.min_slack_instance["replay"] = to_jsonable(checks.run(res.check, res.min_slack_instance["payload"]))
    return res


# ---------------------------------------------------------------------------
# per-instance properties
# ---------------------------------------------------------------------------

class _Gen:
    """Per-property payload drawing with the shared sampling conventions."""

    def __init__(self, rng, cfg: SuiteConfig):
        self.rng = rng
        self.cfg = cfg

    def n(self, cap=None):
        lo, hi = self.cfg.n_range
        hi = min(hi, cap) if cap else hi
        return int(self.rng.integers(min(lo, hi), hi + 1))

    def complex(self) -> bool:
        if self.cfg.field == "both":
            return bool(self.rng.random() < 0.5)
        return self.cfg.field == "complex"

    def weights(self, n):
        mode = self.cfg.weight_mode
        if mode == "mixed":
            mode = ("unit", "probability", "random")[int(self.rng.integers(0, 3))]
        if mode == "unit":
            return [1.0] * n
        w = np.exp(self.rng.uniform(-2, 2, size=n))
        if mode == "probability":
            w = w / w.sum()
        return w.tolist()

    def vec(self, n, cplx=None, scale=True):
        cplx = self.complex() if cplx is None else cplx
        v = self.rng.standard_normal(n)
        if cplx:
            v = v + 1j * self.rng.standard_normal(n)
        if scale:
            v = v * 10.0 ** self.rng.uniform(-2, 2)
        return _fn_json(v, n)

    def nonzero_vec(self, n, cplx=None):
        v = self.vec(n, cplx)
        return v if np.any(np.asarray(v) != 0) else [1.0] + v[1:]

    def mat(self, rows, cols, cplx=False):
        M = self.rng.standard_normal((rows, cols))
        if cplx:
            M = M + 1j * self.rng.standard_normal((rows, cols))
        return [_fn_json(r, cols) for r in M]

    def exp(self, lo, hi, allow_inf=True, **kw):
        return float(_exponents(self.rng, 1, lo, hi, self.cfg.exponent_pool, allow_inf=allow_inf, **kw)[0])

    def alpha(self):
        a = float(np.exp(self.rng.uniform(-3, 3)))
        return a if self.rng.random() < 0.5 else -a

    def closed_pair(self, n, real=True):
        """(r, s) with a closed-form operator norm."""
        kind = int(self.rng.integers(0, 4 if (real and n <= 10) else 3))
        if kind == 0:
            return self.exp(1.0, INF), INF
        if kind == 1:
            return 1.0, self.exp(1.0, INF)
        if kind == 2:
            return 2.0, 2.0
        return INF, 1.0


def _g_homogeneity(g: _Gen):
    n = g.n()
    return {"weights": g.weights(n), "f": g.vec(n), "alpha": g.alpha(), "p": _exp_json(g.exp(0.1, INF))}


def _g_scalar_power(g: _Gen):
    r = g.rng
    return {"a": float(np.exp(r.uniform(-5, 5))), "b": float(np.exp(r.uniform(-5, 5))) if r.random() > 0.1 else 0.0, "p": g.exp(0.01, 1.0, allow_inf=False)}


def _g_triangle(g: _Gen):
    n = g.n()
    c = g.complex()
    return {"weights": g.weights(n), "f1": g.vec(n, c), "f2": g.vec(n, c), "p": _exp_json(g.exp(1.0, INF))}


def _g_vector_reduction(g: _Gen):
    n = g.n()
    return {"weights": g.weights(n), "f": g.vec(n), "p": _exp_json(g.exp(0.1, INF))}


def _space_json(kind, p, dim):
    return {"kind": "lp" if kind == "lp" else "weighted_lp", "p": _exp_json(p), "dimension": dim}


def _g_vector_minkowski(g: _Gen):
    n, d = g.n(8), int(g.rng.integers(1, 9))
    c = g.complex()
    F1 = [g.vec(d, c, scale=False) for _ in range(n)]
    F2 = [g.vec(d, c, scale=False) for _ in range(n)]
    return {"weights": g.weights(n), "F1": F1, "F2": F2, "space": _space_json("lp", g.exp(1.0, INF), d), "p": _exp_json(g.exp(1.0, INF))}


def _g_vector_p_power(g: _Gen):
    n, d = g.n(8), int(g.rng.integers(1, 9))
    c = g.complex()
    p = g.exp(0.1, 1.0, allow_inf=False)
    F1 = [g.vec(d, c, scale=False) for _ in range(n)]
    F2 = [g.vec(d, c, scale=False) for _ in range(n)]
    return {"weights": g.weights(n), "F1": F1, "F2": F2, "space": _space_json("lp", p, d), "p": p}


def _g_descends(g: _Gen):
    d = int(g.rng.integers(1, 9))
    p = g.exp(0.1, 1.0, allow_inf=False)
    q = p * float(g.rng.uniform(0.1, 1.0))
    return {"v": g.vec(d, False), "w": g.vec(d, False), "space": _space_json("lp", p, d), "p": p, "q": q}


def _g_holder_witness(g: _Gen):
    n = g.n()
    return {"weights": g.weights(n), "h": g.nonzero_vec(n), "p": g.exp(1.0, INF, allow_inf=False), "q": g.exp(1.0, INF, allow_inf=False)}


def _g_young_path(g: _Gen):
    return {"a": float(np.exp(g.rng.uniform(-2, 2))), "p": g.exp(1.0, 8.0, allow_inf=False, lo_open=True)}


def _g_interp_endpoint(g: _Gen):
    n = g.n()
    a, b = g.exp(0.1, INF), g.exp(0.1, INF)
    return {"weights": g.weights(n), "f": g.vec(n), "p": _exp_json(min(a, b)), "q": _exp_json(max(a, b)), "theta": float(g.rng.integers(0, 2))}


def _g_scale_invariance(g: _Gen):
    which = ("holder", "product_holder", "minkowski", "interpolation")[int(g.rng.integers(0, 4))]
    n = g.n()
    c = g.complex()
    pl = {"inequality": which, "alpha": g.alpha(), "weights": g.weights(n)}
    if which == "interpolation":
        a, b = g.exp(0.1, INF), g.exp(0.1, INF)
        pl.update(f=g.vec(n, c), p=_exp_json(min(a, b)), q=_exp_json(max(a, b)), theta=float(g.rng.random()))
        return pl
    pl.update(f1=g.vec(n, c), f2=g.vec(n, c))
    if which == "holder":
        p = g.exp(1.0, INF)
        pl.update(p=_exp_json(p), q=_exp_json(conjugate(p)))
    elif which == "product_holder":
        pl.update(p=_exp_json(g.exp(0.1, INF)), q=_exp_json(g.exp(0.1, INF)))
    else:
        pl.update(p=_exp_json(g.exp(1.0, INF)))
    return pl


def _g_mult_norm(g: _Gen):
    n = g.n()
    c = g.complex()
    pl = {"weights": g.weights(n), "h": g.vec(n, c), "p": _exp_json(g.exp(0.1, INF)), "q": _exp_json(g.exp(0.1, INF))}
    if g.rng.random() < 0.3:
        d = int(g.rng.integers(1, 5))
        pl["F"] = [g.vec(d, c, scale=False) for _ in range(n)]
        pl["space"] = _space_json("lp", g.exp(1.0, INF), d)
    else:
        pl["f"] = g.vec(n, c)
    return pl


def _g_sharpness(g: _Gen):
    n = g.n()
    h = np.asarray(g.rng.standard_normal(n) * np.exp(g.rng.uniform(-1, 1)))
    if g.complex():
        h = h + 1j * g.rng.standard_normal(n)
    return {"weights": g.weights(n), "h": _fn_json(h, n), "p": g.exp(0.25, 8.0, allow_inf=False), "q": g.exp(0.25, 8.0, allow_inf=False)}


def _g_linearity(g: _Gen):
    n = g.n(10)
    c = g.complex()
    return {"weights": g.weights(n), "kernel": g.mat(n, n, c), "f": g.vec(n, c), "g": g.vec(n, c), "alpha": g.alpha()}


def _g_opnorm_bound(g: _Gen):
    n = g.n(6)
    c = g.complex()
    return {"weights": g.weights(n), "kernel": g.mat(n, n, c), "f": g.vec(n, c), "r": _exp_json(g.exp(1.0, INF)), "s": _exp_json(g.exp(1.0, INF))}


def _g_composition(g: _Gen):
    n = g.n(10)
    c = g.complex()
    return {"weights": g.weights(n), "kernel": g.mat(n, n, c), "h1": g.vec(n, c), "h2": g.vec(n, c)}


def _transfer_exps(g: _Gen, n, real):
    r, s = g.closed_pair(n, real)
    q1 = INF if (r == INF or g.rng.random() < 0.3) else r * float(np.exp(g.rng.uniform(0, 2)))
    q2 = g.exp(1.0, INF)
    return r, s, q1, q2


def _g_transfer_forward(g: _Gen):
    n = g.n(8)
    c = g.complex()
    r, s, q1, q2 = _transfer_exps(g, n, not c)
    return {"weights": g.weights(n), "kernel": g.mat(n, n, c), "h1": g.vec(n, c), "h2": g.vec(n, c), "phi": g.vec(n, c), "r": _exp_json(r), "s": _exp_json(s), "q1": _exp_json(q1), "q2": _exp_json(q2)}


def _g_converse(g: _Gen):
    n = g.n(10)
    c = g.complex()
    r, s, q1, q2 = _transfer_exps(g, n, not c)
    return {"weights": g.weights(n), "kernel": g.mat(n, n, c), "r": _exp_json(r), "s": _exp_json(s), "q1": _exp_json(q1), "q2": _exp_json(q2), "factor": 0.9, "trials": 8, "seed": int(g.rng.integers(0, 2**31))}


def _g_infone_condition(g: _Gen):
    n = g.n(8)
    c = g.complex()
    w = np.asarray(g.weights(n))
    K = np.asarray(g.rng.standard_normal((n, n)))
    if c:
        K = K + 1j * g.rng.standard_normal((n, n))
    ds = float(np.sum(np.abs(K) * w[:, None] * w[None, :]))
    K = K * (float(g.rng.uniform(0.2, 1.2)) / ds)
    return {"weights": w.tolist(), "kernel": [_fn_json(r, n) for r in K], "trials": 2000, "seed": int(g.rng.integers(0, 2**31))}


def _g_infone_construct(g: _Gen):
    n = g.n(8)
    w = np.asarray(g.weights(n))
    r, s = g.closed_pair(n, True)
    h1 = g.rng.standard_normal(n)
    h2 = g.rng.standard_normal(n)
    h1 *= float(g.rng.uniform(0.3, 1.0)) / lp_norm(h1, w, r)
    h2 *= float(g.rng.uniform(0.3, 1.0)) / lp_norm(h2, w, conjugate(s))
    K = np.asarray(g.mat(n, n))
    K *= float(g.rng.uniform(0.3, 1.0)) / operator_norm(KernelOperator(WeightedSet([str(i) for i in range(n)], w), K), r, s, exact_only=True).value
    return {"weights": w.tolist(), "kernel": K.tolist(), "h1": h1.tolist(), "h2": h2.tolist(), "r": _exp_json(r), "s": _exp_json(s), "trials": 2000, "seed": int(g.rng.integers(0, 2**31))}


def _trace_space(g: _Gen, d):
    kind = int(g.rng.integers(0, 4))
    if kind == 0:
        return {"kind": "lp", "p": 2, "dimension": d}
    if kind == 1:
        return {"kind": "lp", "p": 1, "dimension": d}
    if kind == 2:
        return {"kind": "lp", "p": "inf", "dimension": d}
    return {"kind": "weighted_lp", "p": 2, "dimension": d, "weights": np.exp(g.rng.uniform(-1, 1, size=d)).tolist()}


def _g_trace_roundtrip(g: _Gen):
    d = int(g.rng.integers(1, 9))
    return {"matrix": g.mat(d, d), "space": _trace_space(g, d)}


def _g_trace_canonical(g: _Gen):
    d = int(g.rng.integers(1, 6))
    return {"matrix": g.mat(d, d), "space": _trace_space(g, d), "p": float((1.0, 0.75, 0.5, 0.25)[int(g.rng.integers(0, 4))]), "seed": int(g.rng.integers(0, 2**31))}


def _g_trace_duality(g: _Gen):
    d = int(g.rng.integers(1, 9))
    B = g.rng.standard_normal((d, d))
    B /= np.linalg.norm(B, 2)
    return {"matrix": g.mat(d, d), "B": [r.tolist() for r in B]}


def _g_trace_homogeneity(g: _Gen):
    d = int(g.rng.integers(1, 6))
    return {"matrix": g.mat(d, d), "space": {"kind": "lp", "p": 2, "dimension": d}, "p": float((1.0, 0.5)[int(g.rng.integers(0, 2))]), "alpha": g.alpha()}


def _g_trace_properties(g: _Gen):
    d = int(g.rng.integers(1, 5))
    return {"matrix": g.mat(d, d), "other": g.mat(d, d), "space": {"kind": "lp", "p": 2, "dimension": d}, "p_list": [1, 0.75, 0.5, 0.25], "seed": int(g.rng.integers(0, 2**31))}


def _g_commutation(g: _Gen):
    n, d = g.n(8), int(g.rng.integers(1, 9))
    return {"weights": g.weights(n), "kernel": g.mat(n, n), "transform": g.mat(d, d), "F": g.mat(n, d)}


def _g_basis(g: _Gen):
    n = g.n()
    return {"weights": g.weights(n), "f": g.vec(n)}


def _g_curry(g: _Gen):
    n1, n2 = int(g.rng.integers(1, 6)), int(g.rng.integers(1, 6))
    return {"weights1": g.weights(n1), "weights2": g.weights(n2), "f": g.vec(n1 * n2)}


def _g_bilinear(g: _Gen):
    n = g.n()
    c = g.complex()
    return {"weights": g.weights(n), "f": g.vec(n, c), "g1": g.vec(n, c), "g2": g.vec(n, c), "alpha": g.alpha()}


# name -> (check, generator, cost divisor)
INSTANCE_PROPERTIES = {
    "homogeneity": ("homogeneity", _g_homogeneity, 1),
    "scalar_power": ("scalar_power", _g_scalar_power, 1),
    "triangle": ("minkowski", _g_triangle, 1),
    "vector_reduction": ("vector_reduction", _g_vector_reduction, 1),
    "vector_minkowski": ("vector_minkowski", _g_vector_minkowski, 1),
    "vector_p_power": ("vector_p_power", _g_vector_p_power, 1),
    "subadditivity_descends": ("subadditivity_descends", _g_descends, 1),
    "holder_witness": ("holder_witness", _g_holder_witness, 1),
    "young_path": ("young_path", _g_young_path, 2),
    "interpolation_endpoint": ("interpolation_endpoint", _g_interp_endpoint, 1),
    "scale_invariance": ("scale_invariance", _g_scale_invariance, 1),
    "mult_norm": ("mult_norm", _g_mult_norm, 1),
    "sharpness": ("sharpness", _g_sharpness, 1),
    "linearity": ("linearity", _g_linearity, 1),
    "opnorm_bound": ("opnorm_bound", _g_opnorm_bound, 20),
    "composition": ("composition", _g_composition, 1),
    "transfer_forward": ("transfer_forward", _g_transfer_forward, 2),
    "converse_detects": ("converse_detects", _g_converse, 4),
    "vector_transfer_reduction": ("vector_transfer_reduction", _g_transfer_forward, 2),
    "infone_bound": ("infone_bound", _g_infone_condition, 4),
    "infone_construct": ("infone_construct", _g_infone_construct, 4),
    "trace_roundtrip": ("trace_roundtrip", _g_trace_roundtrip, 1),
    "trace_canonical_bound": ("trace_canonical_bound", _g_trace_canonical, 10),
    "trace_duality": ("trace_duality", _g_trace_duality, 4),
    "trace_homogeneity": ("trace_homogeneity", _g_trace_homogeneity, 4),
    "trace_properties": ("trace_properties", _g_trace_properties, 20),
    "commutation": ("commutation", _g_commutation, 1),
    "basis": ("basis", _g_basis, 1),
    "curry": ("curry", _g_curry, 1),
    "bilinear": ("bilinear", _g_bilinear, 1),
}


def property_names() -> list:
    return list(CORPUS) + list(INSTANCE_PROPERTIES) + ["interpolation_literal"]


def run_instance_property(name: str, cfg: SuiteConfig, trials: Optional[int] = None) -> PropertyResult:
    check_name, gen, divisor = INSTANCE_PROPERTIES[name]
    g = _Gen(_rng(cfg.seed, name), cfg)
    m = trials if trials is not None else max(1, int(cfg.trials) // divisor)
    res = PropertyResult(name, check_name)
    for _ in range(m):
        pl = gen(g)
        cert = checks.run(check_name, pl)
        if cert.status == "not_applicable":
            res.not_applicable += 1
            continue
        failed = not cert.ok
        res.failed += failed
        res.passed += not failed
        rel_slack = cert.slack / max(1.0, abs(cert.rhs))
        _record(res, pl, rel_slack, failed, replay=False)
        if failed and "replay" not in res.first_failure:
            res.first_failure["replay"] = to_jsonable(cert)
    return res


def _literal_property(cfg: SuiteConfig) -> PropertyResult:
    """The rejected literal interpolation reading, run as a live property."""
    res = PropertyResult("interpolation_literal", "interpolation_literal")
    ce = LITERAL_COUNTEREXAMPLE
    pl = {"weights": ce["weights"], "labels": ce["labels"], "f": ce["values"], "p": ce["p"], "q": ce["q"]}
    cert = checks.run("interpolation_literal", pl)
    failed = not cert.ok
    res.failed += failed
    res.passed += not failed
    _record(res, pl, cert.slack / max(1.0, abs(cert.rhs)), failed)
    return res


def literal_counterexample_report() -> dict:
    ce = LITERAL_COUNTEREXAMPLE
    pl = {"weights": ce["weights"], "labels": ce["labels"], "f": ce["values"], "p": ce["p"], "q": ce["q"]}
    cert = checks.run("interpolation_literal", pl)
    return {"check": "interpolation_literal", "payload": pl, "certificate": to_jsonable(cert)}


def run_suite(cfg: SuiteConfig, clock=time.perf_counter) -> SuiteReport:
    t0 = clock()
    wanted = set(cfg.properties) if cfg.properties is not None else None
    fields = ("real", "complex") if cfg.field == "both" else (cfg.field,)
    results = []
    for name in CORPUS:
        if wanted is None or name in wanted:
            results.append(
                run_corpus_property(
                    name,
                    cfg.seed,
                    cfg.trials,
                    tuple(cfg.n_range),
                    fields,
                    (cfg.weight_mode,),
                    tuple(cfg.exponent_pool),
                    float(cfg.tolerances.get(name, EQ_TOL)),
                )
            )
    for name in INSTANCE_PROPERTIES:
        if wanted is None or name in wanted:
            results.append(run_instance_property(name, cfg))
    if cfg.paper_literal_interpolation and (wanted is None or "interpolation_literal" in wanted):
        results.append(_literal_property(cfg))
    return SuiteReport(__version__, cfg.to_dict(), results, literal_counterexample_report(), clock() - t0)
