import itertools

import numpy as np
import pytest

import oracles
from lpbench import NormedSpace
from lpbench import tracenorm as tn
from lpbench.errors import DomainError, PreconditionError, UsageError
from lpbench.norms import INF
from lpbench.tracenorm import Functional, LinearMap, RankOneRepresentation


def test_dual_norm_examples():
    assert tn.dual_norm(Functional(NormedSpace.lp(2, 2), [3, 4])) == pytest.approx(5.0)
    W = NormedSpace.lp(INF, 2)
    assert tn.dual_norm(Functional(W, [1, 1])) == pytest.approx(2.0)
    # corner enumeration oracle
    corners = [abs(1 * a + 1 * b) for a, b in itertools.product((-1, 1), repeat=2)]
    assert max(corners) == 2
    assert tn.dual_norm(Functional(NormedSpace.lp(3, 4), np.zeros(4))) == 0.0


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0, INF])
def test_dual_norm_matches_sampling(p):
    rng = np.random.default_rng(0)
    W = NormedSpace.lp(p, 3)
    c = rng.standard_normal(3)
    exact = tn.dual_norm(Functional(W, c))
    U = rng.standard_normal((200_000, 3))
    U = np.concatenate([U, np.sign(U[:1000])])
    vals = np.abs(U @ c) / W.norms(U)
    assert vals.max() <= exact * (1 + 1e-12)
    assert vals.max() >= exact * 0.99


def test_dual_norm_custom_is_close():
    # a custom evaluator that is secretly the l1 norm: its dual is the max norm
    W = NormedSpace.custom(lambda u: float(np.abs(u).sum()), 3)
    c = np.array([0.3, -2.0, 1.0])
    assert tn.dual_norm(Functional(W, c)) == pytest.approx(2.0, rel=1e-6)


def test_assemble_examples():
    W = NormedSpace.lp(2, 2)
    rep = RankOneRepresentation.from_terms(W, [(1.0, [1, 0], [1, 0])])
    assert tn.assemble(rep).matrix.tolist() == [[1, 0], [0, 0]]
    assert not np.any(tn.assemble(RankOneRepresentation.empty(W)).matrix)
    lam, w = np.array([0.6, 0.8]), np.array([0.0, 1.0])
    rep = RankOneRepresentation.from_terms(W, [(2.5, lam, w), (-2.5, lam, w)])
    assert not np.any(tn.assemble(rep).matrix)


def test_assemble_rejects_inadmissible():
    W = NormedSpace.lp(2, 2)
    rep = RankOneRepresentation.from_terms(W, [(1.0, [1, 0], [1, 0]), (1.0, [3, 0], [1, 0])])
    with pytest.raises(PreconditionError, match="term 1"):
        tn.assemble(rep)


def test_canonical_examples():
    W = NormedSpace.lp(2, 2)
    rep = tn.canonical_representation(LinearMap(W, np.zeros((2, 2))))
    assert len(rep) == 0 and rep.p_sum(1) == 0.0
    rep = tn.canonical_representation(LinearMap(W, np.eye(2)))
    assert len(rep) == 2
    assert rep.p_sum(1) == pytest.approx(2.0)


@pytest.mark.parametrize("p", [1, 2, 1.5, INF])
def test_canonical_roundtrip(p):
    rng = np.random.default_rng(1)
    for d in (1, 3, 6):
        W = NormedSpace.lp(p, d)
        M = rng.standard_normal((d, d))
        back = tn.assemble(tn.canonical_representation(LinearMap(W, M))).matrix
        assert np.allclose(back, M, rtol=1e-12, atol=1e-12)


def test_trace_quasinorm_zero():
    W = NormedSpace.lp(2, 3)
    for p in (1.0, 0.5, 0.25):
        assert tn.trace_quasinorm(LinearMap(W, np.zeros((3, 3))), p).value == 0.0


def test_trace_quasinorm_diag():
    est = tn.trace_quasinorm(LinearMap(NormedSpace.lp(2, 2), np.diag([3.0, 4.0])), 1)
    assert est.kind == "exact_euclidean"
    assert est.value == pytest.approx(7.0, abs=1e-9)
    assert oracles.singular_value_sum(np.diag([3.0, 4.0])) == 7.0
    # duality: B = I has operator norm 1 and trace(B A) = 7
    A = LinearMap(NormedSpace.lp(2, 2), np.diag([3.0, 4.0]))
    assert tn.duality_lower_bound(A, np.eye(2)) == pytest.approx(7.0)


def test_trace_quasinorm_rank_one():
    W = NormedSpace.lp(2, 3)
    lam = np.array([1.0, 2.0, 2.0]) / 3
    w = np.array([0.0, 0.6, 0.8])
    c = -2.5
    A = LinearMap(W, c * np.outer(w, lam))
    for p in (1.0, 0.5, 0.25):
        assert tn.trace_quasinorm(A, p).value == pytest.approx(abs(c), rel=1e-9)
    # lower bound by hand: B = conj(lam) w^T has operator norm 1 and trace(BA) = c
    assert tn.duality_lower_bound(A, np.outer(lam, w)) == pytest.approx(abs(c))


def test_trace_quasinorm_euclidean_random_against_svd():
    rng = np.random.default_rng(2)
    for d in range(1, 9):
        M = rng.standard_normal((d, d))
        A = LinearMap(NormedSpace.lp(2, d), M)
        est = tn.trace_quasinorm(A, 1)
        assert est.value == pytest.approx(oracles.singular_value_sum(M), abs=1e-6)
        back = tn.assemble(est.representation).matrix
        assert np.allclose(back, M, atol=1e-12)


def test_trace_quasinorm_rejects_large_p():
    with pytest.raises(UsageError):
        tn.trace_quasinorm(LinearMap(NormedSpace.lp(2, 2), np.eye(2)), 1.5)


def test_estimate_never_exceeds_canonical():
    rng = np.random.default_rng(3)
    for kind in (1, INF, 3):
        W = NormedSpace.lp(kind, 4)
        A = LinearMap(W, rng.standard_normal((4, 4)))
        for p in (1.0, 0.5):
            est = tn.trace_quasinorm(A, p, restarts=2, iters=40)
            assert est.value <= est.details["canonical_value"] * (1 + 1e-12)
            assert np.allclose(tn.assemble(est.representation).matrix, A.matrix, atol=1e-10)


def test_homogeneity():
    rng = np.random.default_rng(4)
    A = LinearMap(NormedSpace.lp(1, 3), rng.standard_normal((3, 3)))
    for p in (1.0, 0.5):
        base = tn.trace_quasinorm(A, p, restarts=2, iters=40).value
        for alpha in (-2.0, 0.001, 40.0):
            v = tn.trace_quasinorm(A * alpha, p, restarts=2, iters=40).value
            assert v == pytest.approx(abs(alpha) * base, rel=1e-9)


def test_properties_examples():
    W = NormedSpace.lp(2, 3)
    rep = tn.quasinorm_properties_check(LinearMap(W, np.zeros((3, 3))), [1, 0.5])
    assert all(v == 0 for v in rep.values.values()) and rep.ok

    rep = tn.quasinorm_properties_check(LinearMap(W, np.eye(3)), [1, 0.5])
    assert rep.values[1.0] == pytest.approx(3.0)
    assert rep.values[0.5] >= rep.values[1.0]
    # the spectral terms alone give (sum 1^(1/2))^2 = 9
    assert rep.values[0.5] <= 9.0 + 1e-9

    W2 = NormedSpace.lp(2, 2)
    A = LinearMap(W2, [[1.0, 0], [0, 0]])
    B = LinearMap(W2, [[0, 0], [0, 2.0]])
    rep = tn.quasinorm_properties_check(A, [1, 0.5], others=[B])
    assert rep.ok
    assert rep.min_subadditivity_slack >= -1e-9


def test_properties_reject_bad_p():
    with pytest.raises(DomainError):
        tn.quasinorm_properties_check(LinearMap(NormedSpace.lp(2, 2), np.eye(2)), [1, 2])


def test_weighted_euclidean_space():
    om = np.array([0.5, 2.0, 1.0])
    W = NormedSpace.weighted_lp(2, om)
    rng = np.random.default_rng(5)
    M = rng.standard_normal((3, 3))
    est = tn.trace_quasinorm(LinearMap(W, M), 1)
    S = np.sqrt(om)
    assert est.value == pytest.approx(oracles.singular_value_sum(S[:, None] * M / S[None, :]), rel=1e-9)
