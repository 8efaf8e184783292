"""Compiled vs pure-Python enumeration kernels on the same brute-force workloads.

Run with ``python benchmarks/bench_kernels.py``; each backend runs in its own
interpreter because the kernel choice is fixed at import.
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
from eocount import kernels
from eocount.builtins import gen_random
from eocount.grid import brute_force_value, flatten_to_csp
from eocount.csp import enumerate_value

repeats = int(sys.argv[1])
from eocount.grid import EOGrid
from eocount.signature import Signature
full = Signature(4, {a: 1 + (a % 3) for a in range(16) if bin(a).count("1") == 2})
# rings of quaternary vertices: slots 1, 2 of v meet slots 3, 4 of v + 1
grids = [EOGrid({"f": full}, ["f"] * n,
                [((v, k), ((v + 1) % n, k + 2)) for v in range(n) for k in (1, 2)])
         for n in (8, 10, 12)]
small = [gen_random("grid-rebalancing", seed=s, arity=6, count=3, max_vertices=6).obj for s in range(40)]
csps = [flatten_to_csp(g) for g in small]
csps = [c for c in csps if c.num_vars <= 18][:10]
out = {"backend": kernels.BACKEND}
t = time.perf_counter()
for _ in range(repeats):
    rows = [brute_force_value(g, budget=10**12) for g in grids]
out["row_combinations_s"] = (time.perf_counter() - t) / repeats
t = time.perf_counter()
for _ in range(repeats):
    vals = [enumerate_value(c) for c in csps]
out["assignments_s"] = (time.perf_counter() - t) / repeats
out["checksum"] = str(sum((v for v in rows), rows[0] * 0)) + " | " + str(sum((v for v in vals), vals[0] * 0))
print(json.dumps(out))
"""


def run(force_python: bool, repeats: int) -> dict:
    env = dict(os.environ)
    env["EOCOUNT_FORCE_PYTHON"] = "1" if force_python else "0"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeats)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    compiled = run(False, args.repeats)
    python = run(True, args.repeats)
    if compiled["checksum"] != python["checksum"]:
        raise SystemExit("backends disagree")
    print(f"{'workload':<20}{'compiled':>12}{'python':>12}{'speedup':>10}")
    for key in ("row_combinations_s", "assignments_s"):
        c, p = compiled[key], python[key]
        print(f"{key[:-2]:<20}{c:>11.4f}s{p:>11.4f}s{p / c:>9.1f}x")
    print(f"(compiled module active: {compiled['backend'] == 'compiled'}; total {time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
