"""Compiled kernels against the pure-numpy/Python fallback.

Times the exhaustive front walk, the non-dominated mask and the rank kernel
on both code paths and checks that they agree.  Run with
``python3 benchmarks/bench_kernels.py``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from mopath import _kernels
from mopath.graph import graph_from_name


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def compare(label, fn, repeat, same):
    _kernels.USE_NUMBA = True
    fn()  # compile outside the timing
    t_nb, a = timed(fn, repeat)
    _kernels.USE_NUMBA = False
    t_np, b = timed(fn, repeat)
    ok = same(a, b)
    print(f"{label:<34} numba {t_nb * 1e3:10.2f} ms   fallback {t_np * 1e3:10.2f} ms   "
          f"speedup {t_np / max(t_nb, 1e-12):7.1f}x   agree={ok}")
    return ok


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--instance", default="ASLETISMAC_NO_X8_Y8_PM_K3_BF")
    parser.add_argument("--points", type=int, default=4000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    saved = _kernels.USE_NUMBA
    rng = np.random.default_rng(0)
    F = rng.integers(0, 20, size=(args.points, 5)).astype(float)
    g = graph_from_name(args.instance)

    def same_front(a, b):
        return a[:2] == b[:2] and a[2].vectors == b[2].vectors

    try:
        results = [
            compare(f"front walk {g.name.removeprefix('ASLETISMAC_')}",
                    lambda: _kernels.dfs_front(g), args.repeat, same_front),
            compare(f"non-dominated mask n={args.points}",
                    lambda: _kernels.nondominated_mask(F), args.repeat, np.array_equal),
            compare(f"ranks n={args.points}",
                    lambda: _kernels.nondominated_ranks(F), args.repeat, np.array_equal),
        ]
    finally:
        _kernels.USE_NUMBA = saved
    if not all(results):
        raise SystemExit("kernel and fallback disagree")


if __name__ == "__main__":
    main()
