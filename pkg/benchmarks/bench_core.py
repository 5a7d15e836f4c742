"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_core.py [--repeat N]
"""

import argparse
import time

import numpy as np

from qpfbounds import _fallback

try:
    from qpfbounds import _core
except ImportError:
    _core = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases():
    m, q, r = 8, 5, 255
    n = 2 * m + q + 1
    L = (1 << n) // r
    rng = np.random.default_rng(0)
    x = np.linspace(0.0, 1.0, 255)
    ell_all = np.arange(1 << n, dtype=np.int64)
    ell = rng.integers(0, 1 << n, size=200_000)
    return [
        ("h_sum (255 x, M=256)", lambda k: k.h_sum(x, 256, L, -1e-7)),
        ("measure_prob_array (2^22)", lambda k: k.measure_prob_array(ell_all, n, r, L)),
        ("cf_batch (200k)", lambda k: k.cf_batch(ell, n, m, r)),
        ("window_batch (200k)", lambda k: k.window_batch(ell, n, r, 32)),
        ("sinc_ratio_array (1M)", lambda k: k.sinc_ratio_array(rng.random(1_000_000) * L, L)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"{'kernel':30s} {'cython [s]':>12s} {'python [s]':>12s} {'speedup':>8s}")
    for name, fn in cases():
        slow = best_of(lambda: fn(_fallback), args.repeat)
        if _core is None:
            print(f"{name:30s} {'n/a':>12s} {slow:12.4f}")
            continue
        fast = best_of(lambda: fn(_core), args.repeat)
        print(f"{name:30s} {fast:12.4f} {slow:12.4f} {slow / fast:7.1f}x")


if __name__ == "__main__":
    main()
