"""Compiled vs pure-Python kernels on the workloads that dominate runtime.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each workload runs in a fresh interpreter per backend so that the
``TORIC_GENERA_KERNELS`` switch takes effect at import.
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOADS = {
    "graded_mul": """
from toric_genera.genera import elliptic_sine
from toric_genera.series import TruncSeries
s = elliptic_sine("delta", "eps", 30)
t = TruncSeries(s.variables, s.order, s._g)
for _ in range(10):
    u = t * t * t
""",
    "rigidity_kr0": """
from toric_genera.genera import exponent_from_spec
from toric_genera.localization import rigidity_check
from toric_genera.quasitoric import fixed_point_data, l23_fixture
data = fixed_point_data(l23_fixture())
f = exponent_from_spec("kr0", 16)
assert rigidity_check(data, f, 10, 5).rigid
""",
    "symmetrized_sn": """
from toric_genera.analysis import symmetrized_residual
assert symmetrized_residual("sn", 0, 10).holds()
""",
}

TIMER = """
import time, sys
t0 = time.perf_counter()
exec(compile(sys.argv[1], "workload", "exec"))
import toric_genera.kernels as k
print(k.BACKEND, time.perf_counter() - t0)
"""


def run(code, backend):
    env = dict(os.environ)
    env["TORIC_GENERA_KERNELS"] = backend
    out = subprocess.run([sys.executable, "-c", TIMER, code], env=env, capture_output=True, text=True, check=True)
    used, secs = out.stdout.split()
    return used, float(secs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    results = {}
    for name, code in WORKLOADS.items():
        row = {}
        for backend in ("python", "auto"):
            best, used = None, None
            for _ in range(args.repeat):
                used, secs = run(code, backend)
                best = secs if best is None else min(best, secs)
            row[used] = best
        results[name] = row
    if args.json:
        print(json.dumps(results, indent=2))
        return
    print(f"{'workload':<16}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for name, row in results.items():
        py = row.get("python")
        cy = row.get("cython")
        if cy is None:
            print(f"{name:<16}{py:>10.3f}{'n/a':>12}{'':>9}")
        else:
            print(f"{name:<16}{py:>10.3f}{cy:>12.3f}{py / cy:>8.2f}x")


if __name__ == "__main__":
    main()
