import math

import numpy as np
import pytest

import oracles
from lpbench import NormedSpace
from lpbench import operators as ops
from lpbench.errors import DegenerateInputError, NotExactError, PreconditionError, ShapeError, UsageError
from lpbench.inequalities import holder_equality_witness
from lpbench.norms import INF, weighted_norm
from lpbench.operators import KernelOperator, MultiplicationOperator, apply, operator_norm
from lpbench.space import ScalarFunction, VectorFunction, WeightedSet, lift_index_transform


def ws(weights):
    return WeightedSet([str(i) for i in range(len(weights))], weights)


def fn(values, weights=None):
    E = ws(weights if weights is not None else np.ones(len(values)))
    return ScalarFunction(E, values)


def test_apply_examples():
    rng = np.random.default_rng(0)
    E = ws(rng.uniform(0.1, 3, 5))
    f = ScalarFunction(E, rng.standard_normal(5))
    assert np.allclose(apply(KernelOperator.identity(E), f).values, f.values, rtol=1e-15)
    H = ws([0.5, 0.5])
    out = apply(KernelOperator(H, np.ones((2, 2))), ScalarFunction(H, [1, 1]))
    assert out.values.tolist() == [1.0, 1.0]
    out = apply(MultiplicationOperator(fn([2, 3])), fn([1, 1]))
    assert out.values.tolist() == [2.0, 3.0]


def test_apply_matches_loop_oracle():
    rng = np.random.default_rng(2)
    w = rng.uniform(0.1, 3, 6)
    K = rng.standard_normal((6, 6))
    f = rng.standard_normal(6)
    got = apply(KernelOperator(ws(w), K), ScalarFunction(ws(w), f)).values
    assert np.allclose(got, oracles.kernel_apply(K, w, f), rtol=1e-13, atol=1e-14)


def test_apply_domain_mismatch():
    with pytest.raises(ShapeError):
        apply(KernelOperator.identity(ws([1, 2])), fn([1, 2, 3]))


def test_kernel_of_examples():
    w = np.array([0.25, 2.0, 3.0])
    E = ws(w)
    a = ops.kernel_of(KernelOperator.identity(E)).kernel
    assert np.allclose(a, np.diag(1 / w), rtol=1e-15)
    h = ScalarFunction(E, [2.0, -1.0, 0.5])
    a = ops.kernel_of(MultiplicationOperator(h)).kernel
    assert np.allclose(a, np.diag(h.values / w), rtol=1e-15)


def test_sandwich_kernel():
    rng = np.random.default_rng(4)
    E = ws(rng.uniform(0.2, 2, 4))
    T = KernelOperator(E, rng.standard_normal((4, 4)))
    h1, h2 = ScalarFunction(E, rng.standard_normal(4)), ScalarFunction(E, rng.standard_normal(4))
    B = ops.sandwich(T, h1, h2).kernel
    assert np.array_equal(B, h2.values[:, None] * T.kernel * h1.values[None, :])
    composed = ops.kernel_of(lambda f: apply(MultiplicationOperator(h2), apply(T, apply(MultiplicationOperator(h1), f))), E)
    assert np.allclose(composed.kernel, B, rtol=1e-13, atol=1e-15)


def test_mult_norm_examples():
    H = ws([0.5, 0.5])
    c = ops.mult_norm_certificate(ScalarFunction(H, [1, 1]), ScalarFunction(H, [3, -1]), 2, INF)
    assert c.status == "equality"
    h = fn([2, 1])
    f = holder_equality_witness(h, 2, 2)
    c = ops.mult_norm_certificate(h, f, 2, 2, 1)
    assert c.lhs == pytest.approx(5.0) and c.rhs == pytest.approx(5.0) and c.status == "equality"
    E = ws([1, 1])
    F = VectorFunction(E, NormedSpace.lp(2, 2), [[0, 1], [1, 0]])
    c = ops.mult_norm_certificate(ScalarFunction(E, [2, 0]), F, 2, 2, 1)
    assert c.lhs == pytest.approx(2.0) and c.rhs == pytest.approx(2 * math.sqrt(2))
    assert c.status == "holds"


def test_mult_norm_relation_checked():
    with pytest.raises(UsageError):
        ops.mult_norm_certificate(fn([1, 2]), fn([1, 1]), 2, 2, 2)


def test_sharpness_examples():
    f = ops.mult_sharpness_witness(fn([2, 1]), 2, 2, 1)
    assert f.values.tolist() == [2.0, 1.0]
    assert (np.abs(f.values * [2, 1])).tolist() == [4.0, 1.0]
    f = ops.mult_sharpness_witness(fn([2, 0]), 2, 2)
    assert f.values.tolist() == [2.0, 0.0]
    assert ops.mult_norm_certificate(fn([2, 0]), f, 2, 2).status == "equality"
    f = ops.mult_sharpness_witness(fn([-3, -3, -3]), 2, 4)
    assert np.allclose(np.abs(f.values), 3.0**2)


def test_sharpness_infinite_exponents():
    h = fn([1, 5, 5, 2])
    f = ops.mult_sharpness_witness(h, 2, INF)
    assert f.values.tolist() == [0.0, 1.0, 0.0, 0.0]
    assert ops.mult_norm_certificate(h, f, 2, INF).status == "equality"
    f = ops.mult_sharpness_witness(h, INF, 3)
    assert f.values.tolist() == [1.0] * 4
    assert ops.mult_norm_certificate(h, f, INF, 3).status == "equality"


def test_sharpness_degenerate():
    with pytest.raises(DegenerateInputError):
        ops.mult_sharpness_witness(fn([0, 0]), 2, 2)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.7, INF])
def test_identity_norm_is_one(p):
    E = ws([0.3, 2.0, 1.1])
    est = operator_norm(KernelOperator.identity(E), p, p, restarts=4, iters=100)
    assert est.value == pytest.approx(1.0, rel=1e-9)


def test_multiplication_kernel_norm_is_sup():
    rng = np.random.default_rng(5)
    w = rng.uniform(0.2, 2, 5)
    h = np.array([0.5, -3.0, 1.0, 2.0, 0.1])
    A = ops.kernel_of(MultiplicationOperator(ScalarFunction(ws(w), h)))
    for r in (1.0, 2.0, INF):
        est = operator_norm(A, r, r)
        assert est.kind == "exact"
        assert est.value == pytest.approx(3.0, rel=1e-12)


def test_sign_enumeration_example():
    H = ws([0.5, 0.5])
    est = operator_norm(KernelOperator(H, np.ones((2, 2))), INF, 1)
    assert est.kind == "exact" and est.method == "sign"
    assert est.value == pytest.approx(1.0)
    assert np.allclose(np.abs(est.maximizer.values), 1.0)
    assert est.maximizer.values[0] == est.maximizer.values[1]


def test_sign_enumeration_matches_itertools():
    rng = np.random.default_rng(9)
    for n in (1, 3, 6, 9):
        w = rng.uniform(0.1, 2, n)
        K = rng.standard_normal((n, n))
        est = operator_norm(KernelOperator(ws(w), K), INF, 1)
        assert est.value == pytest.approx(oracles.sign_enum_inf_to_one(K, w), rel=1e-12)


@pytest.mark.parametrize("r, s, method", [(2.5, INF, "rows"), (1, 3, "columns"), (2, 2, "spectral")])
def test_closed_forms_against_sampling(r, s, method):
    rng = np.random.default_rng(11)
    w = rng.uniform(0.2, 2, 4)
    K = rng.standard_normal((4, 4))
    A = KernelOperator(ws(w), K)
    est = operator_norm(A, r, s)
    assert est.method == method and est.kind == "exact"
    sampled, _ = oracles.sphere_sample_opnorm(K, w, r, s, samples=20_000, seed=1)
    assert sampled <= est.value * (1 + 1e-9)
    assert sampled >= est.value * 0.99
    assert ops.ratio(A, est.maximizer, r, s) == pytest.approx(est.value, rel=1e-9)


def test_ascent_reports_lower_bound_with_maximizer():
    rng = np.random.default_rng(12)
    E = ws(rng.uniform(0.2, 2, 5))
    A = KernelOperator(E, rng.standard_normal((5, 5)))
    est = operator_norm(A, 3, 1.5, restarts=8, iters=200, seed=3)
    assert est.kind in ("lower_bound", "certified_interval")
    assert ops.ratio(A, est.maximizer, 3, 1.5) == pytest.approx(est.value, rel=1e-9)
    assert est.upper is not None and est.value <= est.upper * (1 + 1e-12)
    with pytest.raises(NotExactError):
        operator_norm(A, 3, 1.5, exact_only=True)


def test_ascent_is_deterministic():
    rng = np.random.default_rng(13)
    E = ws(rng.uniform(0.2, 2, 4))
    A = KernelOperator(E, rng.standard_normal((4, 4)))
    a = operator_norm(A, 3, 1.5, restarts=4, iters=100, seed=7)
    b = operator_norm(A, 3, 1.5, restarts=4, iters=100, seed=7)
    assert a.value == b.value
    assert np.array_equal(a.maximizer.values, b.maximizer.values)


def test_transfer_forward_examples():
    H = ws([0.5, 0.5])
    one = ScalarFunction(H, [1, 1])
    c = ops.transfer_forward_certificate(KernelOperator.identity(H), one, one, one, 2, 2, 2, 2)
    assert c.details["p"] == "inf" and c.details["t"] == 1.0
    assert c.lhs == pytest.approx(1.0) and c.rhs == pytest.approx(1.0)
    assert c.status == "equality"
    zero = ScalarFunction(H, [0, 0])
    c = ops.transfer_forward_certificate(KernelOperator.identity(H), zero, one, one, 2, 2, 2, 2)
    assert (c.lhs, c.rhs, c.status) == (0.0, 0.0, "equality")


def test_transfer_forward_random_instances():
    rng = np.random.default_rng(14)
    w = rng.uniform(0.2, 2, 3)
    E = ws(w)
    T = KernelOperator(E, rng.standard_normal((3, 3)))
    r, s, q1, q2 = 1.0, 2.0, 3.0, 4.0
    k = operator_norm(T, r, s).value
    p = 1 / (1 / r - 1 / q1)
    t = 1 / (1 / q2 + 1 / s)
    for _ in range(200):
        h1, h2, phi = (rng.standard_normal(3) for _ in range(3))
        c = ops.transfer_forward_certificate(T, *(ScalarFunction(E, v) for v in (h1, h2, phi)), r, s, q1, q2, k=k)
        lhs = oracles.norm(h2 * np.array(oracles.kernel_apply(T.kernel, w, h1 * phi)), w, t)
        rhs = k * oracles.norm(h1, w, q1) * oracles.norm(h2, w, q2) * oracles.norm(phi, w, p)
        assert c.lhs == pytest.approx(lhs, rel=1e-10)
        assert c.rhs == pytest.approx(rhs, rel=1e-10)
        assert c.ok


def test_transfer_forward_rejects_q1_below_r():
    E = ws([1, 1])
    one = ScalarFunction(E, [1, 1])
    with pytest.raises(UsageError):
        ops.transfer_forward_certificate(KernelOperator.identity(E), one, one, one, 2, 2, 1.5, 2)


def test_transfer_converse_examples():
    rng = np.random.default_rng(15)
    E = ws(rng.uniform(0.2, 2, 4))
    T = KernelOperator(E, rng.standard_normal((4, 4)))
    exact = operator_norm(T, 1, 2).value
    c = ops.transfer_converse_check(T, 1, 2, 2, 2, exact, trials=100)
    assert c.ok
    c = ops.transfer_converse_check(T, 1, 2, 2, 2, 0.9 * exact, trials=100)
    assert c.status == "violated"
    wit = c.witness
    f = wit["f"]
    assert weighted_norm(apply(T, f), 2) > 0.9 * exact * weighted_norm(f, 1)
    Z = KernelOperator(E, np.zeros((4, 4)))
    assert ops.transfer_converse_check(Z, 1, 2, 2, 2, 0.0, trials=20).ok


def test_vector_transfer_examples():
    rng = np.random.default_rng(16)
    E = ws(rng.uniform(0.2, 2, 3))
    T = KernelOperator(E, rng.standard_normal((3, 3)))
    h1, h2, phi = (ScalarFunction(E, rng.standard_normal(3)) for _ in range(3))
    scalar = ops.transfer_forward_certificate(T, h1, h2, phi, 1, INF, 2, 2)
    Phi = VectorFunction(E, NormedSpace.scalars(), phi.values[:, None])
    vec = ops.vector_transfer_certificate(lift_index_transform(T), h1, h2, Phi, 1, INF, 2, 2)
    assert vec.lhs == pytest.approx(scalar.lhs, rel=1e-12)
    assert vec.rhs == pytest.approx(scalar.rhs, rel=1e-12)

    perm = KernelOperator.from_matrix(E, np.eye(3)[[2, 0, 1]])
    F = VectorFunction(E, NormedSpace.lp(2, 2), rng.standard_normal((3, 2)))
    c = ops.vector_transfer_certificate(lift_index_transform(perm, NormedSpace.lp(2, 2)), h1, h2, F, 2, 2, 2, 2, k=5.0)
    assert c.details["lifted_identity_holds"]
    # kernels store a / w, so the weight round trip costs a few ulps
    assert c.details["lifted_identity_max_diff"] <= 1e-15 * np.abs(F.values).max() * 10

    P = ws([0.25, 0.75])
    T2 = KernelOperator(P, rng.standard_normal((2, 2)))
    one = ScalarFunction(P, [1, 1])
    G = VectorFunction(P, NormedSpace.lp(1, 2), rng.standard_normal((2, 2)))
    k = operator_norm(T2, 2, INF).value
    c = ops.vector_transfer_certificate(lift_index_transform(T2, NormedSpace.lp(1, 2)), one, one, G, 2, INF, INF, INF, k=k)
    from lpbench.norms import vector_norm

    assert c.lhs == pytest.approx(vector_norm(lift_index_transform(T2)(G), INF), rel=1e-12)
    assert c.rhs == pytest.approx(k * vector_norm(G, 2), rel=1e-12)


def test_vector_transfer_needs_k():
    E = ws([1, 1])
    T = KernelOperator.identity(E)
    one = ScalarFunction(E, [1, 1])
    F = VectorFunction(E, NormedSpace.lp(2, 2), np.ones((2, 2)))
    with pytest.raises(UsageError):
        ops.vector_transfer_certificate(lift_index_transform(T), one, one, F, 2, 2, 2, 2)


def test_infone_condition_examples():
    H = ws([0.5, 0.5])
    c = ops.infone_condition_check(KernelOperator(H, np.ones((2, 2))), trials=1000)
    assert c.lhs == pytest.approx(1.0) and c.status == "equality"
    assert c.details["inf_to_one_norm"] == pytest.approx(1.0)
    c = ops.infone_condition_check(KernelOperator(H, np.zeros((2, 2))), trials=100)
    assert c.lhs == 0.0 and c.ok
    K = np.array([[2.0, 2.0], [2.0, -2.0]])
    c = ops.infone_condition_check(KernelOperator(H, K), trials=1000)
    assert c.lhs == pytest.approx(2.0) and c.status == "violated"
    # oracle: max over signs of sum_x w(x)|sum_y K e w| = 1.0 here, so the bound still holds
    assert oracles.sign_enum_inf_to_one(K, [0.5, 0.5]) == pytest.approx(1.0)
    assert c.details["inf_to_one_norm"] == pytest.approx(1.0)
    assert c.details["bound_holds"]


def test_infone_construct_examples():
    rng = np.random.default_rng(17)
    w = np.full(4, 0.25)
    E = ws(w)
    T = KernelOperator.identity(E)
    h1 = ScalarFunction(E, rng.standard_normal(4))
    h1 = h1 * (1 / weighted_norm(h1, 2))
    h2 = ScalarFunction(E, rng.standard_normal(4))
    h2 = h2 * (1 / weighted_norm(h2, 2))
    A = ops.infone_construct(T, h1, h2, 2, 2)
    c = ops.infone_condition_check(A, trials=10_000)
    assert c.details["bound_holds"]
    assert c.details["sampled_max_ratio"] <= 1 + 1e-9

    d1 = ScalarFunction(E, [2.0, 0, 0, 0])  # ||.||_{w,2} = 1
    d2 = ScalarFunction(E, [0, 0, 2.0, 0])
    A = ops.infone_construct(T, d1, d2, 2, 2)
    assert np.count_nonzero(A.kernel) == 0  # identity kernel is diagonal, supports disjoint
    d2 = ScalarFunction(E, [2.0, 0, 0, 0])
    A = ops.infone_construct(T, d1, d2, 2, 2)
    # rank one: b(0,0) = 2 * 4 * 2 = 16; ||A f||_{w,1} = 16 * w0 * w0 * |f0| = |f0|
    assert A.kernel[0, 0] == pytest.approx(16.0)
    assert np.count_nonzero(A.kernel) == 1
    assert ops.operator_norm(A, INF, 1).value == pytest.approx(1.0)

    zero = ScalarFunction(E, np.zeros(4))
    assert not np.any(ops.infone_construct(T, zero, h2, 2, 2).kernel)


def test_infone_construct_preconditions():
    E = ws([1, 1])
    T = KernelOperator.identity(E)
    big = ScalarFunction(E, [2, 2])
    ok = ScalarFunction(E, [0.5, 0.5])
    with pytest.raises(PreconditionError, match="h1"):
        ops.infone_construct(T, big, ok, 2, 2)
    with pytest.raises(PreconditionError, match="h2"):
        ops.infone_construct(T, ok, big, 2, 2)
    with pytest.raises(PreconditionError):
        ops.infone_construct(KernelOperator(E, 3 * np.eye(2)), ok, ok, 2, 2)


@pytest.mark.parametrize("seed", range(5))
def test_linearity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    E = ws(rng.uniform(0.1, 3, n))
    A = KernelOperator(E, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    f = ScalarFunction(E, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    g = ScalarFunction(E, rng.standard_normal(n) + 1j * rng.standard_normal(n))
    alpha = complex(rng.standard_normal(), rng.standard_normal())
    lhs = apply(A, f * alpha + g).values
    rhs = alpha * apply(A, f).values + apply(A, g).values
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12)
