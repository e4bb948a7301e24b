"""Compare the numba kernels with the pure-numpy fallback.

Each backend runs in its own interpreter (the backend is fixed at import time
by NEARCOLL_BACKEND). Workloads:

  search   one near-collision search on truncated SHA-256 (hash step + engine)
  table    Brent on random mappings held in a table (engine overhead only)
  diam     exhaustive fiber diameters of a covering code (popcount loops)

Usage: python3 benchmarks/bench_backends.py [--repeat 3] [--json]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from nearcoll import _accel
from nearcoll.covering_code import compress_array, direct_sum
from nearcoll.cycle_finder import find_cycle_table
from nearcoll.kernels import group_diameters
from nearcoll.search import SearchConfig, find_near_collision

repeat = int(sys.argv[1])


def timed(fn):
    fn()  # warm-up (also triggers numba compilation)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        work = fn()
        best = min(best, time.perf_counter() - t)
    return {"seconds": best, "work": work, "rate": work / best}


def search():
    rep = find_near_collision(SearchConfig(40, 4, "trunc-opt", seed=2))
    return rep.evaluations


rng = np.random.default_rng(0)
tables = [rng.integers(0, 1 << 16, size=1 << 16, dtype=np.uint64) for _ in range(200)]


def table():
    return sum(find_cycle_table(t, 1, "brent").evaluations for t in tables)


spec = direct_sum([2] * 5, leftover=2)
xs = np.arange(1 << spec.n, dtype=np.uint64)
comp = compress_array(spec, xs)
grouped = xs[np.argsort(comp, kind="stable")]
starts = np.arange(0, xs.size + 1, spec.fiber_size, dtype=np.int64)


def diam():
    group_diameters(grouped, starts)
    return xs.size * (spec.fiber_size - 1) // 2  # pairs examined


print(json.dumps({"backend": _accel.BACKEND, "search": timed(search), "table": timed(table), "diam": timed(diam)}))
"""


def run_backend(name, repeat):
    env = dict(os.environ, NEARCOLL_BACKEND=name)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", action="store_true")
    args = p.parse_args()

    results = {b: run_backend(b, args.repeat) for b in ("numba", "numpy")}
    if args.json:
        print(json.dumps(results, indent=2))
        return
    print(f"{'workload':<8} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for w in ("search", "table", "diam"):
        a, b = results["numba"][w]["seconds"], results["numpy"][w]["seconds"]
        print(f"{w:<8} {a:>10.4f} {b:>10.4f} {b / a:>7.1f}x")


if __name__ == "__main__":
    main()
