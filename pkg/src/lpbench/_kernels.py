"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The backend is chosen once at import time.  Set ``LPBENCH_NUMBA=0`` to force
the numpy implementations (useful for debugging and for the benchmark that
compares the two).  Both implementations are always importable under their
explicit names so they can be tested against each other.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("LPBENCH_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _flag not in ("0", "false", "no", "off")
BACKEND = "numba" if USE_NUMBA else "numpy"

# patterns per block in the numpy sign enumeration
_SIGN_BLOCK = 1 << 14


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def power_sums_numpy(absvals, weights, p):
    """Row sums of ``absvals**p * weights`` for a 2-d batch.

    ``p`` is a scalar or one exponent per row.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.ndim:
        p = p[:, None]
    return np.add.reduce(np.power(absvals, p) * weights, axis=-1)


def sign_enum_numpy(matrix, weights):
    """max over sign vectors e (e[0] = +1) of sum_x w(x) |(matrix @ e)(x)|.

    Returns ``(value, pattern)``.
    """
    n = matrix.shape[0]
    if n == 1:
        return abs(matrix[0, 0]) * weights[0], np.ones(1)
    total = 1 << (n - 1)
    bits = np.arange(n - 1, dtype=np.int64)
    best_val = -1.0
    best_code = 0
    for start in range(0, total, _SIGN_BLOCK):
        codes = np.arange(start, min(total, start + _SIGN_BLOCK), dtype=np.int64)
        signs = np.ones((codes.size, n))
        signs[:, 1:] = 1.0 - 2.0 * ((codes[:, None] >> bits) & 1)
        vals = np.abs(signs @ matrix.T) @ weights
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_val = float(vals[i])
            best_code = int(codes[i])
    pattern = np.ones(n)
    pattern[1:] = 1.0 - 2.0 * ((best_code >> bits) & 1)
    return best_val, pattern


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if numba is not None:

    @numba.njit(cache=True)
    def _power_sums_nb(absvals, weights, p):
        m, n = absvals.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            pi = p[i]
            for j in range(n):
                a = absvals[i, j]
                if a != 0.0:
                    acc += a ** pi * weights[i, j]
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _power_sums_shared_nb(absvals, weights, p):
        # one weight vector for every row
        m, n = absvals.shape
        out = np.empty(m)
        for i in range(m):
            acc = 0.0
            pi = p[i]
            for j in range(n):
                a = absvals[i, j]
                if a != 0.0:
                    acc += a ** pi * weights[j]
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _sign_enum_nb(matrix, weights):
        # Gray-code walk over sign patterns with the first sign pinned to +1;
        # g tracks matrix @ eps incrementally.
        n = matrix.shape[0]
        eps = np.ones(n)
        g = np.zeros(n)
        for x in range(n):
            acc = 0.0
            for y in range(n):
                acc += matrix[x, y]
            g[x] = acc
        best_val = 0.0
        for x in range(n):
            best_val += weights[x] * abs(g[x])
        best = eps.copy()
        total = 1 << (n - 1)
        for k in range(1, total):
            # bit flipped between gray(k-1) and gray(k) is the lowest set bit of k
            j = 0
            kk = k
            while (kk & 1) == 0:
                kk >>= 1
                j += 1
            col = j + 1
            s = eps[col]
            for x in range(n):
                g[x] -= 2.0 * s * matrix[x, col]
            eps[col] = -s
            val = 0.0
            for x in range(n):
                val += weights[x] * abs(g[x])
            if val > best_val:
                best_val = val
                best[:] = eps
        return best_val, best

    def power_sums_numba(absvals, weights, p):
        absvals = np.ascontiguousarray(absvals, dtype=np.float64)
        p = np.ascontiguousarray(np.broadcast_to(np.asarray(p, dtype=np.float64), absvals.shape[:1]))
        weights = np.asarray(weights, dtype=np.float64)
        if weights.ndim == 1 or weights.shape[0] == 1:
            w = np.ascontiguousarray(np.broadcast_to(weights.reshape(-1), absvals.shape[-1:]))
            return _power_sums_shared_nb(absvals, w, p)
        w = np.ascontiguousarray(np.broadcast_to(weights, absvals.shape))
        return _power_sums_nb(absvals, w, p)

    def sign_enum_numba(matrix, weights):
        val, pattern = _sign_enum_nb(
            np.ascontiguousarray(matrix, dtype=np.float64),
            np.ascontiguousarray(weights, dtype=np.float64),
        )
        # incremental updates drift; re-evaluate the winning pattern directly
        val = float(np.abs(matrix @ pattern) @ weights)
        return val, pattern

else:  # pragma: no cover
    power_sums_numba = None
    sign_enum_numba = None


if USE_NUMBA:
    power_sums = power_sums_numba
    sign_enum = sign_enum_numba
else:
    power_sums = power_sums_numpy
    sign_enum = sign_enum_numpy
