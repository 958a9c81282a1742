"""Benchmark the numba kernels against the pure-numpy fallback.

Run:  python benchmarks/bench_kernels.py [--size 352] [--repeats 5]

The same inputs go through both backends; outputs are checked for exact
equality before timing, so the table doubles as a consistency check.
"""

import argparse
import time

import numpy as np

from scribsal.kernels import numba_impl, numpy_impl


def timeit(fn, repeats):
    fn()  # warmup (and JIT compile on the numba side)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", type=int, default=352)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    n = args.size
    rng = np.random.default_rng(0)

    fg = np.ascontiguousarray(rng.random((n, n)) < 0.3)
    bg = np.ascontiguousarray(~fg & (rng.random((n, n)) < 0.5))
    gx = rng.normal(size=(n, n))
    gy = rng.normal(size=(n, n))
    mag = np.hypot(gx, gy)
    strong = mag > np.quantile(mag, 0.97)
    weak = ~strong & (mag > np.quantile(mag, 0.80))
    pred = rng.random((n, n))
    gt = (rng.random((n, n)) < 0.4).astype(np.uint8)

    cases = [
        ("window_label_counts(k=13)",
         lambda impl: impl.window_label_counts(fg, bg, 13)),
        ("nonmax_suppression",
         lambda impl: impl.nonmax_suppression(mag, gx, gy)),
        ("hysteresis_connect",
         lambda impl: impl.hysteresis_connect(strong, weak)),
        ("threshold_counts",
         lambda impl: impl.threshold_counts(pred, gt)),
    ]

    print(f"input {n}x{n}, best of {args.repeats}")
    print(f"{'kernel':<28}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, call in cases:
        ref = call(numpy_impl)
        got = call(numba_impl)
        ref = ref if isinstance(ref, tuple) else (ref,)
        got = got if isinstance(got, tuple) else (got,)
        for a, b in zip(ref, got):
            np.testing.assert_array_equal(a, b)
        t_np = timeit(lambda: call(numpy_impl), args.repeats)
        t_nb = timeit(lambda: call(numba_impl), args.repeats)
        print(f"{name:<28}{t_np * 1e3:>10.2f}ms{t_nb * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
