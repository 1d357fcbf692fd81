"""Compiled vs pure-Python search kernel on random club instances.

    python benchmarks/bench_kernel.py [--repeat 3] [--quick]

Both kernels run the same search, so besides timing them this checks that
they agree on the optimum and on the decision and conflict counts.
"""
import argparse
import statistics
import time

from kclub.encode import encode
from kclub.maxsat import SolveBudget, available_backends, solve_internal
from kclub.randgen import generate_connected, preset

CASES = [
    # n, D, ndv, k, method, seed
    (100, 0.035, "min", 3, "paths", 7),
    (100, 0.1, "min", 2, "paths", 7),
    (100, 0.1, "max", 2, "paths", 3),
    (100, 0.05, "min", 4, "reach", 7),
    (100, 0.1, "min", 3, "reach", 7),
]
QUICK = CASES[:2]


def run(case, backend, repeat):
    n, d, ndv, k, method, seed = case
    f = encode(generate_connected(preset(n, d, ndv, seed)), k, method).formula
    times, last = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        last = solve_internal(f, SolveBudget(600), backend=backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), last


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    if "cython" not in available_backends():
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':<28}{'omega':>6}{'nodes':>9}{'python s':>11}{'cython s':>11}{'speedup':>9}")
    for case in QUICK if args.quick else CASES:
        tp, rp = run(case, "python", args.repeat)
        tc, rc = run(case, "cython", args.repeat)
        same = (rp.lower_bound, rp.nodes, rp.conflicts) == (rc.lower_bound, rc.nodes, rc.conflicts)
        label = "n{} D={} {} k={} {}".format(*case[:5])
        print(f"{label:<28}{rc.lower_bound:>6}{rc.nodes:>9}{tp:>11.3f}{tc:>11.3f}{tp / tc:>8.1f}x"
              + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
