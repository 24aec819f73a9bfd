"""Time the RK4 kernel with numba against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--steps 20000] [--repeat 5]
"""

import argparse
import time

import numpy as np

from rlfgen.polyring import Polynomial
from rlfgen.dynamics import VectorField
from rlfgen.simcheck import numba_kernels, numpy_kernels, simulate


def field():
    x, y = Polynomial.variables(("x", "y"))
    return VectorField(("x", "y"), (-x + y * y, -x * y))


def bench(kernels, f, steps, repeat):
    simulate(f, [0.1, 0.1], 1e-3, 1e-3, kernels=kernels)  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        tr = simulate(f, [0.1, 0.1], 1e-3, steps * 1e-3, kernels=kernels)
        best = min(best, time.perf_counter() - t)
    return best, tr.final


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    f = field()
    t_np, end_np = bench(numpy_kernels(), f, args.steps, args.repeat)
    print(f"numpy  {t_np * 1e3:9.2f} ms  final={end_np}")
    nb = numba_kernels()
    if nb is None:
        print("numba  unavailable")
        return
    t_nb, end_nb = bench(nb, f, args.steps, args.repeat)
    print(f"numba  {t_nb * 1e3:9.2f} ms  final={end_nb}")
    print(f"speed-up {t_np / t_nb:.1f}x, max state difference {np.max(np.abs(end_np - end_nb)):.2e}")


if __name__ == "__main__":
    main()
