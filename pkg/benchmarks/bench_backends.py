#!/usr/bin/env python3
"""Compare the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter (the switch is read at import
time). Reported times are the best of ``--repeats`` factor+solve runs on
random systems, after one warm-up call.

    python benchmarks/bench_backends.py --m 2,4,8 --sizes 1000,10000
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = """
import json, sys, time
from cbpenta import BACKEND
from cbpenta.problems import gen_random
from cbpenta.solver import factorize, solve

cases, repeats = json.loads(sys.argv[1]), int(sys.argv[2])
mat, f, _ = gen_random(2, 5, seed=0)
solve(factorize(mat), f)
out = []
for m, n in cases:
    mat, f, x = gen_random(m, n, seed=0)
    best_f = best_s = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fac = factorize(mat)
        t1 = time.perf_counter()
        report = solve(fac, f, exact=x)
        t2 = time.perf_counter()
        best_f, best_s = min(best_f, t1 - t0), min(best_s, t2 - t1)
    out.append([m, n, best_f, best_s, report.err])
print(json.dumps({"backend": BACKEND, "rows": out}))
"""


def run_backend(disable, cases, repeats):
    env = dict(os.environ, CBPENTA_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, json.dumps(cases), str(repeats)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--m", default="2,4,8")
    parser.add_argument("--sizes", default="1000,10000")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    cases = [[int(m), int(n)] for m in args.m.split(",") for n in args.sizes.split(",")]

    fast = run_backend(False, cases, args.repeats)
    slow = run_backend(True, cases, args.repeats)
    print(f"m\tn\t{fast['backend']}_s\t{slow['backend']}_s\tspeedup\terr_{fast['backend']}\terr_{slow['backend']}")
    for a, b in zip(fast["rows"], slow["rows"]):
        t_fast, t_slow = a[2] + a[3], b[2] + b[3]
        print(f"{a[0]}\t{a[1]}\t{t_fast:.4f}\t{t_slow:.4f}\t{t_slow / t_fast:.1f}\t{a[4]:.2e}\t{b[4]:.2e}")


if __name__ == "__main__":
    main()
