"""Hölder, Young, product-Hölder, interpolation and Minkowski as certificates.

Every check returns a :class:`~lpbench.norms.Certificate`; the witness
constructors build functions for which the inequalities become equalities.
"""
from __future__ import annotations

import numpy as np

from .errors import DegenerateInputError, DomainError, PreconditionError, UsageError
from .norms import (
    EQ_TOL,
    Certificate,
    INF,
    as_exponent,
    certify,
    exponent_json,
    exponents_close,
    from_recip,
    power_sum,
    recip,
    weighted_norm,
)
from .space import ScalarFunction, _check_domain, check_same_field


def _pair(f1: ScalarFunction, f2: ScalarFunction) -> None:
    _check_domain(f1.domain, f2.domain)
    check_same_field(f1, f2)


def _check_conjugate(p: float, q: float) -> None:
    if p < 1 or q < 1:
        raise UsageError(f"Hölder exponents must be >= 1, got p={p}, q={q}")
    if abs(recip(p) + recip(q) - 1.0) > EQ_TOL:
        raise UsageError(f"exponents are not conjugate: 1/{p} + 1/{q} != 1")


def pairing(f1: ScalarFunction, f2: ScalarFunction):
    """sum_x f1(x) f2(x) w(x) (no conjugation)."""
    return np.sum(f1.values * f2.values * f1.domain.weights)


def holder_certificate(f1: ScalarFunction, f2: ScalarFunction, p, q) -> Certificate:
    p, q = as_exponent(p), as_exponent(q)
    _check_conjugate(p, q)
    _pair(f1, f2)
    lhs = abs(pairing(f1, f2))
    rhs = weighted_norm(f1, p) * weighted_norm(f2, q)
    return certify("holder", lhs, rhs, details={"p": exponent_json(p), "q": exponent_json(q)})


def young_certificate(a: float, b: float, p, q) -> Certificate:
    """a b <= a^p/p + b^q/q for a, b >= 0 and conjugate 1 < p, q < inf."""
    p, q = as_exponent(p), as_exponent(q)
    if p == INF or q == INF:
        raise UsageError("Young's inequality needs finite exponents")
    if p <= 1 or q <= 1:
        raise UsageError(f"Young's inequality needs p, q > 1, got p={p}, q={q}")
    _check_conjugate(p, q)
    a, b = float(a), float(b)
    if a < 0 or b < 0:
        raise DomainError("Young's inequality takes nonnegative reals")
    ap, bq = a ** p, b ** q
    details = {"p": p, "q": q, "a^p": ap, "b^q": bq, "equality_condition": bool(abs(ap - bq) <= EQ_TOL * max(1.0, ap, bq))}
    return certify("young", a * b, ap / p + bq / q, details=details)


def holder_normalized_form(f1: ScalarFunction, f2: ScalarFunction, p, q) -> Certificate:
    """Hölder for normalized inputs via the pointwise Young bound.

    Requires ||f1||_{w,p} = ||f2||_{w,q} = 1.  The main comparison is
    |sum f1 f2 w| <= 1/p + 1/q; a part records the summed pointwise bound
    sum |f1 f2| w <= sum (|f1|^p/p + |f2|^q/q) w when 1 < p < inf.
    """
    p, q = as_exponent(p), as_exponent(q)
    _check_conjugate(p, q)
    _pair(f1, f2)
    n1, n2 = weighted_norm(f1, p), weighted_norm(f2, q)
    if abs(n1 - 1) > EQ_TOL or abs(n2 - 1) > EQ_TOL:
        raise PreconditionError(f"inputs must be normalized, got norms {n1} and {n2}")
    w = f1.domain.weights
    parts = []
    if 1 < p < INF:
        a1, a2 = np.abs(f1.values), np.abs(f2.values)
        pointwise = float(np.sum(a1 * a2 * w))
        bound = power_sum(a1, w, p) / p + power_sum(a2, w, q) / q
        parts.append(certify("pointwise_young", pointwise, bound))
    lhs = abs(pairing(f1, f2))
    return certify("holder_normalized", lhs, recip(p) + recip(q), parts=parts, details={"p": exponent_json(p), "q": exponent_json(q)})


def _check_product_relation(p: float, q: float, r: float) -> None:
    if not exponents_close(r, from_recip(recip(p) + recip(q))):
        raise UsageError(f"need 1/r = 1/p + 1/q, got p={p}, q={q}, r={r}")


def product_holder_certificate(f1: ScalarFunction, f2: ScalarFunction, p, q, r=None) -> Certificate:
    """||f1 f2||_{w,r} <= ||f1||_{w,p} ||f2||_{w,q} with 1/r = 1/p + 1/q."""
    p, q = as_exponent(p), as_exponent(q)
    r = from_recip(recip(p) + recip(q)) if r is None else as_exponent(r)
    _check_product_relation(p, q, r)
    _pair(f1, f2)
    lhs = weighted_norm(ScalarFunction(f1.domain, f1.values * f2.values), r)
    rhs = weighted_norm(f1, p) * weighted_norm(f2, q)
    return certify("product_holder", lhs, rhs, details={"p": exponent_json(p), "q": exponent_json(q), "r": exponent_json(r)})


def interpolation_exponent(p: float, q: float, theta: float) -> float:
    return from_recip(theta * recip(p) + (1 - theta) * recip(q))


def interpolation_certificate(f: ScalarFunction, p, q, theta: float) -> Certificate:
    """||f||_{w,r} <= ||f||_{w,p}^theta ||f||_{w,q}^(1-theta), 1/r = theta/p + (1-theta)/q."""
    p, q = as_exponent(p), as_exponent(q)
    theta = float(theta)
    if not 0 <= theta <= 1:
        raise UsageError(f"theta must lie in [0, 1], got {theta}")
    if p > q:
        raise UsageError(f"interpolation needs p <= q, got p={p}, q={q}")
    r = interpolation_exponent(p, q, theta)
    lhs = weighted_norm(f, r)
    rhs = weighted_norm(f, p) ** theta * weighted_norm(f, q) ** (1 - theta)
    return certify(
        "interpolation",
        lhs,
        rhs,
        details={"p": exponent_json(p), "q": exponent_json(q), "theta": theta, "r": exponent_json(r)},
    )


def interpolation_literal_certificate(f: ScalarFunction, p, q) -> Certificate:
    """The rejected reading ||f||_r <= ||f||_p^(p/r) ||f||_q^(q/r), 1/r = 1/p + 1/q.

    Kept only to reproduce its counterexample; it is not scale invariant.
    """
    p, q = as_exponent(p), as_exponent(q)
    if p == INF or q == INF:
        raise UsageError("literal form is only meaningful for finite exponents")
    r = from_recip(recip(p) + recip(q))
    lhs = weighted_norm(f, r)
    rhs = weighted_norm(f, p) ** (p / r) * weighted_norm(f, q) ** (q / r)
    return certify("interpolation_literal", lhs, rhs, details={"p": p, "q": q, "r": r})


LITERAL_COUNTEREXAMPLE = {"labels": ["x"], "weights": [1.0], "values": [0.5], "p": 2.0, "q": 2.0}


def minkowski_certificate(f1: ScalarFunction, f2: ScalarFunction, p) -> Certificate:
    """Triangle inequality for the weighted p-norm, 1 <= p <= inf.

    For 1 < p < inf the two parts bound the split sums
    sum |f_i| |f1+f2|^(p-1) w <= ||f_i||_p ||f1+f2||_p^(p-1).
    """
    p = as_exponent(p)
    if p < 1:
        raise UsageError(f"Minkowski needs p >= 1 (use the p-power form below 1), got {p}")
    _pair(f1, f2)
    s = f1 + f2
    ns, n1, n2 = weighted_norm(s, p), weighted_norm(f1, p), weighted_norm(f2, p)
    parts = []
    details = {"p": exponent_json(p)}
    if 1 < p < INF:
        w = f1.domain.weights
        tail = np.abs(s.values) ** (p - 1)
        split = []
        for name, fi, ni in (("split_first", f1, n1), ("split_second", f2, n2)):
            partial = float(np.sum(np.abs(fi.values) * tail * w))
            split.append(partial)
            parts.append(certify(name, partial, ni * ns ** (p - 1)))
        total = power_sum(np.abs(s.values), w, p)
        parts.insert(0, certify("split_sum", total, split[0] + split[1]))
        details["partial_sums"] = split
    return certify("minkowski", ns, n1 + n2, parts=parts, details=details)


def p_power_certificate(f1: ScalarFunction, f2: ScalarFunction, p) -> Certificate:
    """||f1+f2||_p^p <= ||f1||_p^p + ||f2||_p^p for 0 < p <= 1."""
    p = as_exponent(p)
    if p > 1:
        raise UsageError(f"p-power subadditivity needs p <= 1, got {p}")
    _pair(f1, f2)
    w = f1.domain.weights
    lhs = power_sum(np.abs(f1.values + f2.values), w, p)
    rhs = power_sum(np.abs(f1.values), w, p) + power_sum(np.abs(f2.values), w, p)
    return certify("p_power", lhs, rhs, details={"p": p})


def scalar_power_certificate(a: float, b: float, p: float) -> Certificate:
    """(a+b)^p <= a^p + b^p for a, b >= 0 and 0 < p <= 1."""
    p = float(p)
    if not 0 < p <= 1:
        raise UsageError(f"need 0 < p <= 1, got {p}")
    if a < 0 or b < 0:
        raise DomainError("a and b must be nonnegative")
    return certify("scalar_power", (a + b) ** p, a ** p + b ** p, details={"p": p})


# ---------------------------------------------------------------------------
# extremal witnesses
# ---------------------------------------------------------------------------

def _phase_conj(h: np.ndarray) -> np.ndarray:
    """conj(sgn h) with sgn(0) = 0."""
    a = np.abs(h)
    out = np.zeros_like(h)
    nz = a > 0
    out[nz] = np.conj(h[nz] / a[nz])
    return out


def sharpness_values(h: np.ndarray, p: float, q: float) -> np.ndarray:
    """Values of f with |h f|^r = |h|^q = |f|^p pointwise (finite p, q).

    Infinite exponents take the adjusted witnesses: q = inf concentrates on
    the first maximizer of |h|, p = inf gives the constant function 1.
    """
    a = np.abs(h)
    if q == INF:
        f = np.zeros_like(h)
        i = int(np.argmax(a))
        f[i] = np.conj(h[i] / a[i])
        return f
    if p == INF:
        return np.ones_like(h)
    return _phase_conj(h) * np.power(a, q / p)


def holder_equality_witness(h: ScalarFunction, p, q) -> ScalarFunction:
    """f with |f| = |h|^(q/p) and phases conj(sgn h).

    Then sum h f w is real and equals ||h||_q ||f||_p when p, q are
    conjugate, and |h f|^r = |h|^q = |f|^p pointwise for 1/r = 1/p + 1/q.
    """
    p, q = as_exponent(p), as_exponent(q)
    if p == INF or q == INF or p < 1 or q < 1:
        raise UsageError(f"equality witness needs 1 <= p, q < inf, got p={p}, q={q}")
    if not np.any(h.values != 0):
        raise DegenerateInputError("h is identically zero")
    return ScalarFunction(h.domain, sharpness_values(h.values, p, q))
