"""Compare the compiled elimination kernel with the numpy fallback.

    python3 benchmarks/bench_rank.py --sizes 500 1000 2000 --repeat 3
"""

import argparse
import statistics
import sys
import time

import numpy as np

from nondefect import _fallback
from nondefect.fieldcore import DEFAULT_PRIME, check_prime

try:
    from nondefect import _kernel
except ImportError:
    _kernel = None


def best_of(fn, a, p, repeat):
    times, result = [], None
    for _ in range(repeat):
        work = a.copy()
        t0 = time.perf_counter()
        result = fn(work, p)
        times.append(time.perf_counter() - t0)
    return result, min(times), statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    ap.add_argument("--rank-fraction", type=float, default=1.0, help="rank of the test matrix relative to its size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    p = check_prime(args.prime)
    if _kernel is None:
        print("compiled kernel not built; only the numpy fallback is timed", file=sys.stderr)

    rng = np.random.default_rng(args.seed)
    print(f"{'size':>6} {'rank':>6} {'numpy s':>10} {'cython s':>10} {'speedup':>8}")
    for n in args.sizes:
        r = max(1, int(n * args.rank_fraction))
        if r < n:
            # rows beyond r are random combinations of the first r
            mix = rng.integers(0, p, (n - r, r), dtype=np.int64)
            base = rng.integers(0, p, (r, n), dtype=np.int64)
            a = np.zeros((n, n), dtype=np.int64)
            a[:r] = base
            for k in range(r):
                a[r:] = (a[r:] + (mix[:, k : k + 1] * base[k : k + 1]) % p) % p
        else:
            a = rng.integers(0, p, (n, n), dtype=np.int64)
        rank_np, t_np, _ = best_of(_fallback.rank_inplace, a, p, args.repeat)
        if _kernel is not None:
            rank_cy, t_cy, _ = best_of(_kernel.rank_inplace, a, p, args.repeat)
            if rank_cy != rank_np:
                raise SystemExit(f"backends disagree at n={n}: {rank_cy} vs {rank_np}")
            print(f"{n:>6} {rank_np:>6} {t_np:>10.3f} {t_cy:>10.3f} {t_np / t_cy:>7.1f}x")
        else:
            print(f"{n:>6} {rank_np:>6} {t_np:>10.3f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
