"""Time GF(p) row reduction with the compiled kernel and the numpy fallback.

    python3 benchmarks/bench_rref.py --sizes 100,200,400 --p 32003
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from forcing import _gfp_py, linalg


def _time(kernel, A, p, repeat):
    best = float("inf")
    for _ in range(repeat):
        M = A.copy()
        t = time.perf_counter()
        piv = kernel.rref_inplace(M, p, -1)
        best = min(best, time.perf_counter() - t)
    return best, M, piv


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="100,200,400")
    ap.add_argument("--p", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    try:
        from forcing import _gfp
    except ImportError:
        _gfp = None
        print("compiled kernel not built; only the fallback is timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        # rank-deficient on purpose so free columns are exercised
        A = linalg.as_matrix(rng.integers(0, args.p, size=(n, n // 2)) @ rng.integers(0, args.p, size=(n // 2, n)) % args.p, args.p)
        tp, Mp, pp = _time(_gfp_py, A, args.p, args.repeat)
        if _gfp is None:
            print(f"{n:>6} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        tc, Mc, pc = _time(_gfp, A, args.p, args.repeat)
        assert list(pp) == list(pc) and np.array_equal(Mp, Mc), "backends disagree"
        print(f"{n:>6} {tp:>10.4f} {tc:>10.4f} {tp / tc:>8.1f}")


if __name__ == "__main__":
    main()
