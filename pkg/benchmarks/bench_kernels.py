#!/usr/bin/env python3
"""Compare the numba site kernel against the pure-numpy fallback.

Two measurements: the raw site step on random stacks of growing size, and a
full evaluation of the N=4, n=(2,2,2), L=4 pre-Bethe vector on the vacuum.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from bethelab import bethe, chain
from bethelab._kernels import set_jit, site_step, site_step_numpy


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_site_step(repeat):
    rng = np.random.default_rng(0)
    print("site step (N, P, Q)        numpy [ms]   numba [ms]   speedup")
    for N, P, Q in [(2, 16, 16), (3, 27, 27), (4, 64, 64), (4, 256, 64)]:
        W = rng.normal(size=(N, P, N, Q)) + 1j * rng.normal(size=(N, P, N, Q))
        C = rng.normal(size=(N, N)) + 0j
        f = 1.3 - 0.2j
        set_jit(True)
        site_step(W, f, C)  # compile
        t_np = best_of(lambda: site_step_numpy(W, f, C), repeat)
        t_nb = best_of(lambda: site_step(W, f, C), repeat)
        assert np.allclose(site_step_numpy(W, f, C), site_step(W, f, C))
        print(f"  {(N, P, Q)!s:24} {1e3 * t_np:10.3f}   {1e3 * t_nb:10.3f}   {t_np / t_nb:7.1f}x")


def bench_bethe_vector(repeat):
    rng = np.random.default_rng(1)
    q = 1.25 + 0.1j
    t = bethe.BetheParams([list(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(3)], "float")
    model = chain.ChainModel.create(4, q, list(rng.normal(size=4) + 1j * rng.normal(size=4)), "float")
    start = time.perf_counter()
    B = bethe.prebv_B(t, q)
    build = time.perf_counter() - start
    out = {}
    for label, flag in [("numpy", False), ("numba", True)]:
        set_jit(flag)
        chain.evaluate_word(model, B)
        out[label] = best_of(lambda: chain.evaluate_word(model, B), repeat)
    set_jit(True)
    print(f"\nN=4 n=(2,2,2) L=4: {B.source_terms} terms, build {1e3 * build:.1f} ms")
    print(f"  evaluate numpy {1e3 * out['numpy']:.1f} ms, numba {1e3 * out['numba']:.1f} ms, "
          f"speedup {out['numpy'] / out['numba']:.1f}x")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    bench_site_step(args.repeat)
    bench_bethe_vector(args.repeat)


if __name__ == "__main__":
    main()
