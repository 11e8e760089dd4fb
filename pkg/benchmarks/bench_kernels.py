"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Part one calls both implementations directly in this process.  Part two
runs a corpus slice end to end in two subprocesses, one per value of
LPBENCH_NUMBA, so the import-time backend switch is exercised as well.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from lpbench import _kernels


def _best(fn, repeat):
    fn()  # warm up (and compile)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def kernel_rows(repeat):
    rng = np.random.default_rng(0)
    rows = []
    for m, n in ((10_000, 16), (100_000, 16), (10_000, 128)):
        a = np.abs(rng.standard_normal((m, n)))
        w = rng.uniform(0.1, 2, n)
        p = rng.uniform(0.25, 8, m)
        t_np = _best(lambda: _kernels.power_sums_numpy(a, w, p), repeat)
        t_nb = _best(lambda: _kernels.power_sums_numba(a, w, p), repeat) if _kernels.power_sums_numba else None
        rows.append(("power_sums", f"{m}x{n}", t_np, t_nb))
    for n in (10, 14, 18):
        M = rng.standard_normal((n, n))
        w = rng.uniform(0.1, 2, n)
        t_np = _best(lambda: _kernels.sign_enum_numpy(M, w), max(1, repeat // 2))
        t_nb = _best(lambda: _kernels.sign_enum_numba(M, w), max(1, repeat // 2)) if _kernels.sign_enum_numba else None
        rows.append(("sign_enum", f"n={n}", t_np, t_nb))
    return rows


_E2E = """
import time
from lpbench import suite, _kernels
t = time.perf_counter()
for name in ("holder", "minkowski", "interpolation"):
    suite.run_corpus_property(name, 1, 10000, (1, 16))
import numpy as np
from lpbench.operators import KernelOperator, operator_norm
from lpbench.space import WeightedSet
rng = np.random.default_rng(0)
A = KernelOperator(WeightedSet.unit(16), rng.standard_normal((16, 16)))
operator_norm(A, float("inf"), 1.0)
print(_kernels.BACKEND, time.perf_counter() - t)
"""


def end_to_end():
    out = {}
    for flag in ("1", "0"):
        env = dict(os.environ, LPBENCH_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", _E2E], env=env, capture_output=True, text=True, check=True)
        backend, secs = res.stdout.split()
        out[backend] = float(secs)
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", default=None, help="also write results here")
    args = ap.parse_args(argv)

    rows = kernel_rows(args.repeat)
    print(f"{'kernel':<12}{'shape':<14}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, shape, t_np, t_nb in rows:
        nb = f"{t_nb * 1e3:12.2f}" if t_nb is not None else f"{'n/a':>12}"
        sp = f"{t_np / t_nb:9.1f}x" if t_nb else f"{'':>10}"
        print(f"{name:<12}{shape:<14}{t_np * 1e3:12.2f}{nb}{sp}")

    e2e = end_to_end()
    print("\nend to end (3 corpus properties x 2e4 instances + one 16x16 sign enumeration, includes import/JIT):")
    for backend, secs in e2e.items():
        print(f"  {backend:<6} {secs:7.2f} s")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump({"kernels": [dict(zip(("kernel", "shape", "numpy_s", "numba_s"), r)) for r in rows], "end_to_end_s": e2e}, fh, indent=2)


if __name__ == "__main__":
    main()
