import os
import subprocess
import sys

import numpy as np
import pytest

import oracles
from lpbench import _kernels

needs_numba = pytest.mark.skipif(_kernels.power_sums_numba is None, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("p", [0.25, 1.0, 2.0, 3.3])
def test_power_sums_parity(p):
    rng = np.random.default_rng(0)
    a = np.abs(rng.standard_normal((50, 13)))
    w = rng.uniform(0.1, 3, 13)
    ref = _kernels.power_sums_numpy(a, w, p)
    got = _kernels.power_sums_numba(a, w, p)
    assert np.allclose(got, ref, rtol=1e-13, atol=0)


@needs_numba
def test_power_sums_per_row_exponent():
    rng = np.random.default_rng(1)
    a = np.abs(rng.standard_normal((6, 5)))
    w = rng.uniform(0.1, 3, 5)
    p = np.array([0.5, 1, 2, 3, 4, 7.5])
    got = _kernels.power_sums_numba(a, w, p)
    for i in range(6):
        assert got[i] == pytest.approx(oracles.norm(a[i], w, p[i]) ** p[i], rel=1e-13)
    assert np.allclose(_kernels.power_sums_numpy(a, w, p), got, rtol=1e-13)


@needs_numba
def test_power_sums_per_row_weights():
    rng = np.random.default_rng(2)
    a = np.abs(rng.standard_normal((20, 7)))
    a[3, 2] = 0.0
    w = rng.uniform(0.1, 3, (20, 7))
    ref = _kernels.power_sums_numpy(a, w, 1.7)
    assert np.allclose(_kernels.power_sums_numba(a, w, 1.7), ref, rtol=1e-13, atol=0)
    shared = _kernels.power_sums_numba(a, w[:1], 1.7)
    assert np.allclose(shared, _kernels.power_sums_numpy(a, w[0], 1.7), rtol=1e-13, atol=0)


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 5, 11])
def test_sign_enum_parity(n):
    rng = np.random.default_rng(n)
    M = rng.standard_normal((n, n))
    w = rng.uniform(0.1, 2, n)
    v1, p1 = _kernels.sign_enum_numpy(M, w)
    v2, p2 = _kernels.sign_enum_numba(M, w)
    assert v1 == pytest.approx(v2, rel=1e-13)
    # the oracle works on the kernel a = M / w
    assert v1 == pytest.approx(oracles.sign_enum_inf_to_one(M / w[None, :], w), rel=1e-12)
    for pat in (p1, p2):
        assert pat[0] == 1.0
        assert float(np.abs(M @ pat) @ w) == pytest.approx(v1, rel=1e-12)


def _backend_in_subprocess(flag):
    env = dict(os.environ, LPBENCH_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from lpbench import _kernels; print(_kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return out.stdout.strip()


def test_backend_flag():
    assert _backend_in_subprocess("0") == "numpy"
    if _kernels.power_sums_numba is not None:
        assert _backend_in_subprocess("1") == "numba"
