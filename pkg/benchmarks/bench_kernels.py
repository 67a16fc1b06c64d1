#!/usr/bin/env python3
"""Compare the numba-compiled kernels against their numpy fallbacks.

Both sides come straight from the kernel registry, so the numbers do not
depend on ARMKIT_DISABLE_NUMBA. Usage:

    python3 benchmarks/bench_kernels.py [--n 200000] [--steps 100000] [--repeat 5]
"""

import argparse
import time

import numba
import numpy as np

from armkit import _accel, kinematics, oscillation  # noqa: F401 - registers kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_ik(n, repeat):
    loop, vectorised = _accel.KERNELS["_ik_loop"]
    compiled = numba.njit(loop)
    rng = np.random.default_rng(0)
    x, y, z = rng.uniform(-2, 2, (3, n))
    a, b = rng.uniform(0.1, 2, (2, n))
    outs = [np.empty(n) for _ in range(3)] + [np.empty(n, dtype=np.bool_)]

    t0 = time.perf_counter()
    compiled(x, y, z, a, b, 1.0, *outs)
    jit = time.perf_counter() - t0
    t_numba = best_of(lambda: compiled(x, y, z, a, b, 1.0, *outs), repeat)
    t_numpy = best_of(lambda: vectorised(x, y, z, a, b, 1.0, *outs), repeat)
    return f"ik batch, n={n}", jit, t_numba, t_numpy


def bench_rk4(steps, repeat):
    loop, plain = _accel.KERNELS["_rk4_step_response"]
    compiled = numba.njit(loop)
    x = np.empty(steps + 1)

    t0 = time.perf_counter()
    compiled(2 * np.pi, 0.3, 1.0, 1e-4, x)
    jit = time.perf_counter() - t0
    t_numba = best_of(lambda: compiled(2 * np.pi, 0.3, 1.0, 1e-4, x), repeat)
    # the plain loop is slow; fewer repeats are enough
    t_numpy = best_of(lambda: plain(2 * np.pi, 0.3, 1.0, 1e-4, x), max(1, repeat // 2))
    return f"rk4 step response, steps={steps}", jit, t_numba, t_numpy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200_000, help="targets for batch IK")
    ap.add_argument("--steps", type=int, default=100_000, help="RK4 steps")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"numba {numba.__version__}, numpy {np.__version__}, active backend: {_accel.backend()}")
    print(f"{'kernel':40s} {'jit s':>8s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, jit, t_nb, t_np in (bench_ik(args.n, args.repeat),
                                  bench_rk4(args.steps, args.repeat)):
        print(f"{name:40s} {jit:8.2f} {1e3 * t_nb:10.2f} {1e3 * t_np:10.2f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
