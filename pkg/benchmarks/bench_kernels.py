"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

from padicpi.kernels import backends

CASES = [
    ("gram_exact_window", (3, -3, 3, 3)),
    ("gram_exact_window", (5, -3, 3, 3)),
    ("gram_float_window", (3, -3, 3, 3)),
    ("gram_float_window", (5, -3, 3, 3)),
    ("green_level_sum", (2, 1.5, -2000, 2000)),
]


def best_of(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = backends()
    if "cython" not in impls:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':<20} {'args':<22} " + " ".join(f"{name:>10}" for name in impls) + "   speedup")
    for name, cargs in CASES:
        times = {}
        results = {}
        for bname, mod in impls.items():
            times[bname], results[bname] = best_of(getattr(mod, name), cargs, args.repeat)
        speed = times["python"] / times["cython"] if "cython" in times and times["cython"] > 0 else float("nan")
        cols = " ".join(f"{times[b]:>9.4f}s" for b in impls)
        print(f"{name:<20} {str(cargs):<22} {cols}   {speed:7.1f}x")
        if len(results) == 2:
            a, b = results.values()
            if name == "gram_float_window":
                agree = a[:2] == b[:2] and abs(a[2] - b[2]) < 1e-12
            elif name == "green_level_sum":
                agree = abs(a - b) <= 1e-15 * abs(a)
            else:
                agree = a == b
            print(f"{'':<20} backends agree: {agree}")


if __name__ == "__main__":
    main()
