import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from lpbench import norms
from lpbench.errors import DomainError, PreconditionError, UsageError
from lpbench.norms import INF, NormedSpace, classify_norm, conjugate, subadditivity_descends, weighted_norm
from lpbench.space import ScalarFunction, VectorFunction, WeightedSet


def fn(values, weights=None):
    n = len(values)
    return ScalarFunction(WeightedSet([str(i) for i in range(n)], weights if weights is not None else np.ones(n)), values)


@pytest.mark.parametrize(
    "values, weights, p, expected",
    [
        ([3, 4], [1, 1], 2, 5.0),
        ([3, -4], [0.1, 9.0], INF, 4.0),
        ([1, 1], [2, 3], 1, 5.0),
        ([1, 1], [0.5, 0.5], 7.3, 1.0),
    ],
)
def test_weighted_norm_examples(values, weights, p, expected):
    assert weighted_norm(fn(values, weights), p) == pytest.approx(expected, rel=1e-15)


def test_vector_norm_examples():
    E = WeightedSet.unit(2)
    F = VectorFunction(E, NormedSpace.lp(2, 2), [[3, 4], [0, 0]])
    assert norms.vector_norm(F, 1) == 5.0
    Z = VectorFunction(E, NormedSpace.lp(2, 2), np.zeros((2, 2)))
    for p in (0.3, 1, 2, INF):
        assert norms.vector_norm(Z, p) == 0.0


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31), st.sampled_from([0.25, 0.5, 1.0, 1.7, 2.0, 3.0, 9.5, INF]))
def test_vector_norm_scalar_reduction_bitwise(n, seed, p):
    rng = np.random.default_rng(seed)
    E = WeightedSet([str(i) for i in range(n)], rng.uniform(0.1, 5, n))
    f = ScalarFunction(E, rng.standard_normal(n))
    F = VectorFunction(E, NormedSpace.scalars(), f.values[:, None])
    assert norms.vector_norm(F, p) == weighted_norm(f, p)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**31), st.floats(0.1, 12.0), st.booleans())
def test_weighted_norm_matches_loop_oracle(n, seed, p, cplx):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.05, 5, n)
    v = rng.standard_normal(n) + (1j * rng.standard_normal(n) if cplx else 0)
    assert weighted_norm(fn(v, w), p) == pytest.approx(oracles.norm(v, w, p), rel=1e-12)


def test_large_exponents_do_not_overflow():
    # |43|^218 overflows a double; the max-scaled evaluation does not
    f = fn([-13.9, -43.4, 7.7])
    p = 218.0
    val = weighted_norm(f, p)
    assert math.isfinite(val)
    assert val == pytest.approx(43.4 * (1 + (13.9 / 43.4) ** p + (7.7 / 43.4) ** p) ** (1 / p), rel=1e-14)
    tiny = fn([1e-3, 2e-3])
    assert weighted_norm(tiny, 400.0) == pytest.approx(2e-3 * (1 + 0.5**400) ** (1 / 400), rel=1e-14)


@pytest.mark.parametrize("p, q", [(2, 2), (1, INF), (INF, 1), (4, 4 / 3)])
def test_conjugate_examples(p, q):
    assert conjugate(p) == pytest.approx(q)


def test_conjugate_rejects_below_one():
    with pytest.raises(DomainError):
        conjugate(0.5)


def test_exponent_parsing():
    assert norms.as_exponent("inf") == INF
    assert norms.as_exponent("∞") == INF
    assert norms.as_exponent(2) == 2.0
    with pytest.raises(DomainError):
        norms.as_exponent(0)
    with pytest.raises(DomainError):
        norms.as_exponent(-1)


def test_monotonicity_examples():
    c = norms.monotonicity_certificate(fn([1, 1]), 1, 2)
    assert c.status == "holds"
    assert c.lhs == pytest.approx(math.sqrt(2)) and c.rhs == pytest.approx(2.0)
    c = norms.monotonicity_certificate(fn([1, 1], [0.5, 0.5]), 1.5, 3)
    assert c.status == "equality"
    c = norms.monotonicity_certificate(fn([2, 0], [0.5, 0.5]), 1, 2)
    assert c.status == "holds"
    assert c.lhs == pytest.approx(1.0) and c.rhs == pytest.approx(math.sqrt(2))


def test_monotonicity_other_weights_not_applicable():
    c = norms.monotonicity_certificate(fn([1, 2], [3.0, 0.1]), 1, 2)
    assert c.status == "not_applicable"


def test_monotonicity_rejects_reversed_exponents():
    with pytest.raises(UsageError):
        norms.monotonicity_certificate(fn([1, 2]), 3, 2)


def test_jensen_examples():
    E = [0.5, 0.5]
    for r in (1.0, 2.0, 5.5):
        assert norms.jensen_power_certificate(fn([1, 1], E), r).status == "equality"
    c = norms.jensen_power_certificate(fn([2, 0], E), 2)
    assert (c.lhs, c.rhs, c.status) == (1.0, 2.0, "holds")
    c = norms.jensen_power_certificate(fn([3, 0.2], [0.3, 0.7]), 1)
    assert c.status == "equality"


def test_jensen_preconditions():
    with pytest.raises(PreconditionError):
        norms.jensen_power_certificate(fn([1, 2], [1, 1]), 2)
    with pytest.raises(DomainError):
        norms.jensen_power_certificate(fn([-1, 2], [0.5, 0.5]), 2)


def test_classify_euclidean_is_norm():
    res = classify_norm(NormedSpace.lp(2, 3), trials=500, seed=1)
    assert res.kind == "norm"
    assert res.triangle_held and res.convexity_held
    assert res.trials == 500 and res.seed == 1


def test_classify_half_norm():
    N = NormedSpace.lp(0.5, 2)
    # hand evaluation: ||(1,0)+(0,1)||_(1/2) = (1+1)^2 = 4 > 2
    assert N.norm(np.array([1.0, 1.0])) == pytest.approx(4.0)
    res = classify_norm(N, trials=2000, seed=0)
    assert res.kind == "p_subadditive"
    assert res.p == pytest.approx(0.5)
    assert not res.triangle_held
    # brute-force grid oracle for the quasinorm constant
    grid = np.linspace(-1, 1, 9)
    best = 0.0
    for a in grid:
        for b in grid:
            for c in grid:
                for d in grid:
                    v, w = np.array([a, b]), np.array([c, d])
                    den = N.norm(v) + N.norm(w)
                    if den > 0:
                        best = max(best, N.norm(v + w) / den)
    assert best <= 2.0 + 1e-12
    assert res.constant <= 2.0 + 1e-9
    assert res.constant == pytest.approx(best, rel=1e-9)


def test_subadditivity_descends_examples():
    N = NormedSpace.lp(0.5, 3)
    rng = np.random.default_rng(0)
    V, W = rng.standard_normal((50, 3)), rng.standard_normal((50, 3))
    assert subadditivity_descends(N, 0.5, 0.5, samples=(V, W)).ok
    c = subadditivity_descends(NormedSpace.lp(1, 2), 1.0, 0.5, trials=300)
    assert c.ok
    Z = np.zeros((1, 3))
    for q in (0.1, 0.3, 0.5):
        assert subadditivity_descends(N, 0.5, q, samples=(Z, rng.standard_normal((1, 3)))).status == "equality"


def test_subadditivity_descends_grid_oracle():
    # |a+b|^(1/2) <= |a|^(1/2) + |b|^(1/2) directly on a grid, lp(1) on R^2
    grid = np.linspace(-2, 2, 7)
    V = np.array([[a, b] for a in grid for b in grid])
    W = V[::-1].copy()
    lhs = np.abs(V + W).sum(axis=1) ** 0.5
    rhs = np.abs(V).sum(axis=1) ** 0.5 + np.abs(W).sum(axis=1) ** 0.5
    assert np.all(lhs <= rhs + 1e-12)
    assert subadditivity_descends(NormedSpace.lp(1, 2), 1.0, 0.5, samples=(V, W)).ok


def test_subadditivity_descends_preconditions():
    with pytest.raises(UsageError):
        subadditivity_descends(NormedSpace.lp(0.5, 2), 0.5, 0.7)
    with pytest.raises(PreconditionError):
        subadditivity_descends(NormedSpace.lp(0.5, 2), 1.0, 0.5)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2**31), st.floats(1.0, 10.0))
def test_triangle_inequality_property(n, seed, p):
    rng = np.random.default_rng(seed)
    w = rng.uniform(0.1, 3, n)
    f, g = fn(rng.standard_normal(n), w), fn(rng.standard_normal(n), w)
    assert weighted_norm(f + g, p) <= (weighted_norm(f, p) + weighted_norm(g, p)) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1e3), st.floats(0.0, 1e3), st.floats(0.01, 1.0))
def test_scalar_power_lemma(a, b, p):
    assert (a + b) ** p <= (a**p + b**p) * (1 + 1e-12) + 1e-300


def test_homogeneity():
    rng = np.random.default_rng(3)
    f = fn(rng.standard_normal(6) + 1j * rng.standard_normal(6), rng.uniform(0.1, 2, 6))
    for p in (0.3, 1, 2.5, INF):
        for alpha in (-3.0, 0.01, 2j):
            assert weighted_norm(f * alpha, p) == pytest.approx(abs(alpha) * weighted_norm(f, p), rel=1e-12)


def test_certificate_status_tolerance():
    assert norms.status_of(1.0, 1.0 + 5e-10) == "equality"
    assert norms.status_of(1.0, 1.1) == "holds"
    assert norms.status_of(1.1, 1.0) == "violated"
    assert norms.status_of(1e9 + 0.5, 1e9) == "equality"
