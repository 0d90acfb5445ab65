"""Compare the numba kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-end-to-end]

Kernel timings call both backends in one process. The end-to-end timing runs
the CLI in fresh subprocesses with DPCURVES_NUMBA=1 and =0, so it includes
import and (first-run) JIT compilation.
"""

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from dpcurves import _kernels

SPLIT_CASES = [
    ("p2 d=12", [12]),
    ("bl4 (9;3,3,2,2)", [9, 3, 3, 2, 2]),
    ("bl6 (12;4,4,4,4,3,3)", [12, 4, 4, 4, 4, 3, 3]),
    ("bl8 (18;6^8)", [18] + [6] * 8),
]

END_TO_END = ["n0", "--surface", "p2x6", "--class", "12;4,4,4,4,3,3"]


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def bench_kernels(repeat):
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    rng = np.random.default_rng(0)
    print(f"{'kernel':<34}" + "".join(f"{b:>14}" for b in backends))
    for label, coords in SPLIT_CASES:
        beta = np.array(coords, dtype=np.int64)
        c1 = 3 * coords[0] - sum(coords[1:])
        for b in backends:  # warm-up, and JIT compile
            _kernels.blowup_splits(beta, c1, True, backend=b)
        times = [best_of(lambda b=b: _kernels.blowup_splits(beta, c1, True, backend=b), repeat)
                 for b in backends]
        rows = len(_kernels.blowup_splits(beta, c1, True, backend="numpy"))
        print(f"{'splits ' + label + f' [{rows}]':<34}" + "".join(f"{t * 1e6:>11.1f} us" for t in times))
    rows = rng.integers(-2, 15, size=(5000, 9)).astype(np.int64)
    for b in backends:
        _kernels.normalize_blowup_rows(rows[:4], backend=b)
    times = [best_of(lambda b=b: _kernels.normalize_blowup_rows(rows, backend=b), repeat) for b in backends]
    print(f"{'normalize 5000 rows, k=8':<34}" + "".join(f"{t * 1e6:>11.1f} us" for t in times))


def bench_end_to_end():
    print("\nend to end: dpcurves " + " ".join(END_TO_END))
    for flag in ("1", "0"):
        env = dict(os.environ, DPCURVES_NUMBA=flag)
        env.pop("GWCACHE_PATH", None)
        start = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "dpcurves", *END_TO_END],
                              env=env, capture_output=True, text=True, check=True)
        elapsed = time.perf_counter() - start
        print(f"  DPCURVES_NUMBA={flag}: {elapsed:7.2f} s  -> {proc.stdout.strip()}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-end-to-end", action="store_true")
    args = parser.parse_args()
    print(f"numba available: {_kernels.HAVE_NUMBA}\n")
    bench_kernels(args.repeat)
    if not args.skip_end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
