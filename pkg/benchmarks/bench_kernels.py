"""Time the numba and numpy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from qtorus import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def mann_case(size, nfree, p1=1000003, p2=998244353):
    rng = np.random.default_rng(0)
    res1 = rng.integers(0, p1, size)
    res2 = rng.integers(0, p2, size)
    a1, a2 = rng.integers(1, p1, nfree), rng.integers(1, p2, nfree)
    args = (res1, res2, a1, a2, 1, 1, 1, 1, p1, p2, nfree)
    return lambda backend: kernels.mann_scan(*args, backend=backend)


def mask_case(l, n, r):
    k = np.arange(1, n + 1)
    shift = np.ones(r * n, dtype=np.int64)
    return lambda backend: kernels.constraint_mask(l, n, r, k, shift, l, backend=backend)


CASES = {
    "mann_scan size=400 nfree=2": mann_case(400, 2),
    "mann_scan size=120 nfree=3": mann_case(120, 3),
    "constraint_mask l=6 n=3 r=2": mask_case(6, 3, 2),
    "constraint_mask l=12 n=2 r=3": mask_case(12, 2, 3),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if kernels.HAVE_NUMBA else [])
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in backends) + "     agree")
    for name, run in CASES.items():
        run("numba") if "numba" in backends else None  # compile outside the timing
        row, outs = [], []
        for b in backends:
            t, out = best_of(lambda: run(b), args.repeat)
            row.append(t)
            outs.append(out)
        agree = all(np.array_equal(outs[0], o) for o in outs[1:])
        print(f"{name:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in row) + f"{str(agree):>10s}")


if __name__ == "__main__":
    main()
