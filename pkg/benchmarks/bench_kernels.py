"""Benchmark: compiled Cython echo-trace kernel vs the pure-numpy fallback.

The echo-trace loop dominates campaign runtime (small dense matmuls repeated
thousands of times), so per-step Python overhead matters. Run:

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from fdlab import _kernels_py
from fdlab.qcore import haar_unitary

try:
    from fdlab import _kernels

    impls = [("cython", _kernels), ("numpy", _kernels_py)]
except ImportError:
    print("compiled kernel unavailable; benchmarking the fallback only")
    impls = [("numpy", _kernels_py)]


def bench(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


CASES = [
    ("decay curve      N=16,  n=60", 16, 60),
    ("decay curve      N=32,  n=90", 32, 90),
    ("trotter products N=16,  n=2048", 16, 2048),
    ("trotter products N=8,   n=2048", 8, 2048),
    ("decay curve      N=256, n=60", 256, 60),
]


def main():
    rng = np.random.default_rng(1)
    print(f"{'case':34s}" + "".join(f"{name:>12s}" for name, _ in impls) + f"{'speedup':>10s}")
    for label, dim, n in CASES:
        u = haar_unitary(dim, rng)
        pu = haar_unitary(dim, rng) @ u
        times = [bench(impl.echo_traces, u, pu, n) for _, impl in impls]
        ratio = times[-1] / times[0] if len(times) == 2 else float("nan")
        print(f"{label:34s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f"{ratio:9.1f}x")


if __name__ == "__main__":
    main()
