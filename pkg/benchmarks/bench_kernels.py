"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--quick]
"""

import argparse
import statistics
import time

import numpy as np

from hamspec import kernels


def _time(fn, repeat):
    fn()  # warm-up
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def cases(quick):
    rng = np.random.default_rng(0)
    n_fwht = 16 if quick else 20
    vec = rng.normal(size=1 << n_fwht)
    words = rng.integers(0, 1 << 24, size=1500 if quick else 4000, dtype=np.uint64)
    code_words = rng.integers(0, 1 << 24, size=400 if quick else 1200, dtype=np.uint64)
    return [
        (f"fwht n={n_fwht}", lambda m: m.fwht(vec)),
        (f"distance_histogram |C|={words.size}", lambda m: m.distance_histogram(words, 24)),
        (f"close_pair_mask |C|={words.size} r=5", lambda m: m.close_pair_mask(words, 5)),
        (f"common_neighbor_stats |C|={code_words.size} i=12", lambda m: m.common_neighbor_stats(code_words, 12)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)

    mods = kernels.backends()
    names = [m.BACKEND for m in mods]
    print(f"{'kernel':45s}" + "".join(f"{n:>12s}" for n in names) + ("    speedup" if len(mods) > 1 else ""))
    for label, call in cases(args.quick):
        times = [_time(lambda m=m: call(m), args.repeat) for m in mods]
        row = f"{label:45s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"  {times[-1] / times[0]:8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
