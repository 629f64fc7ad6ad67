"""Compiled vs pure-Python timings for the two hot kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Compilation happens once before timing; both paths see identical inputs.
"""
import argparse
import time

import numpy as np

from ctcsim import qlin
from ctcsim._accel import HAS_NUMBA
from ctcsim.dctc import induced_channel, vec
from ctcsim.kernels import averaged_orbit, jacobi_hermitian


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def jacobi_case(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = a + a.conj().T
    return f"jacobi_hermitian n={n}", (m,), jacobi_hermitian


def orbit_case(d_cr, d_ctc, rng):
    ch = induced_channel(qlin.haar_unitary(d_cr * d_ctc, rng), qlin.random_pure_state(d_cr, rng))
    s = np.ascontiguousarray(ch.superoperator)
    x0 = vec(np.eye(d_ctc, dtype=np.complex128) / d_ctc)
    return f"averaged_orbit d_cr={d_cr} d_ctc={d_ctc}", (s, x0, float(d_ctc), 1e-10, 1_000_000), averaged_orbit


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    if not HAS_NUMBA:
        print("numba disabled (CTCSIM_DISABLE_NUMBA set or numba missing); both columns run Python")

    rng = np.random.default_rng(args.seed)
    cases = [jacobi_case(n, rng) for n in (4, 16, 64)]
    cases += [orbit_case(dc, dt, rng) for dc, dt in ((2, 2), (4, 4), (2, 8))]

    print(f"{'kernel':<36}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for name, inputs, kernel in cases:
        kernel(*[a.copy() if isinstance(a, np.ndarray) else a for a in inputs])  # compile
        fast = best_of(lambda: kernel(*inputs), args.repeat)
        slow = best_of(lambda: kernel.py_func(*inputs), args.repeat)
        print(f"{name:<36}{fast * 1e3:>10.3f}ms{slow * 1e3:>10.3f}ms{slow / fast:>9.1f}x")


if __name__ == "__main__":
    main()
