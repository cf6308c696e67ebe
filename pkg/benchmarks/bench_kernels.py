"""Benchmark the batched biquaternion kernels: numba vs pure numpy.

Run as ``python3 benchmarks/bench_kernels.py [N]``.  Each backend gets a
warmup call (numba JIT compilation) before timing.
"""

import sys
import time

import numpy as np

from cqgeom.kernels import get_backends


def bench(fn, *args, repeats=20):
    fn(*args)  # warmup / JIT
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    rng = np.random.default_rng(42)
    a = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
    b = rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))
    backends = get_backends()
    print(f"N = {n}, backends: {', '.join(backends)}")
    for op, args in (("batch_mul", (a, b)), ("batch_inner", (a, b)),
                     ("batch_norm", (a,))):
        times = {}
        for name, mod in backends.items():
            times[name] = bench(getattr(mod, op), *args)
        line = "  ".join(f"{name}: {t * 1e3:8.2f} ms" for name, t in times.items())
        if "numba" in times and "numpy" in times:
            line += f"  (speedup {times['numpy'] / times['numba']:.2f}x)"
        print(f"{op:<12} {line}")


if __name__ == "__main__":
    main()
