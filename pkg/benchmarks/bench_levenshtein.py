"""Compare the compiled edit-distance kernel with the pure-Python row DP.

Runs both kernels on identical random note pairs across a range of
lengths and prints a table of best-of-N times.  Numbers land in the
README; rerun after touching _speed.pyx or _levenshtein_py.

    python3 benchmarks/bench_levenshtein.py
"""

import random
import time

from tunegram.metrics import ACTIVE_BACKEND, _levenshtein_py

try:
    from tunegram import _speed
except ImportError:
    _speed = None

SIZES = [32, 64, 128, 256, 512, 1024, 2048]
REPEATS = 5
SEED = 20240915


def best_of(fn, a, b, repeats=REPEATS):
    out = None
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(a, b)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    print(f"active backend: {ACTIVE_BACKEND}")
    if _speed is None:
        print("compiled kernel unavailable; timing the Python DP only")
    rnd = random.Random(SEED)
    header = f"{'n':>6} {'python':>12} {'c':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in SIZES:
        a = tuple(rnd.randrange(24) for _ in range(n))
        b = tuple(rnd.randrange(24) for _ in range(n))
        d_py, t_py = best_of(_levenshtein_py, a, b)
        if _speed is None:
            print(f"{n:>6} {t_py * 1e3:>10.3f}ms {'-':>12} {'-':>9}")
            continue
        d_c, t_c = best_of(_speed.levenshtein_ints, a, b)
        if d_py != d_c:
            raise SystemExit(
                f"kernel mismatch at n={n}: python {d_py} != c {d_c}")
        print(f"{n:>6} {t_py * 1e3:>10.3f}ms {t_c * 1e3:>10.3f}ms "
              f"{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
