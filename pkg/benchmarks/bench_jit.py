#!/usr/bin/env python3
"""
Side-by-side benchmark: JIT-compiled kernels vs the plain-Python fallback.

The kernel path is chosen once at import time from SIRTIMES_NO_JIT, so each
mode runs in a fresh interpreter. Children time only the grid evaluation
(imports and compilation excluded) and emit the exact CSV payload, which the
parent compares byte for byte across modes.
"""
import os
import subprocess
import sys
import time

NX, NY = 61, 41

CHILD = """
import sys, time
from sirtimes import GridSpec, ModelParams, run_grid, rows_to_csv

kind, method, nx, ny = sys.argv[1], sys.argv[2], int(sys.argv[3]), int(sys.argv[4])
params = ModelParams(beta=2.0, gamma=3.0, mu=1.0)
run_grid(params, GridSpec(0.0, 6.0, 2, 1.0, 5.0, 2), kind, method, threads=1)
spec = GridSpec(0.0, 6.0, nx, 1.0, 5.0, ny)
t0 = time.perf_counter()
result = run_grid(params, spec, kind, method, threads=1)
elapsed = time.perf_counter() - t0
sys.stdout.write(rows_to_csv(result.rows))
print(f"{elapsed:.6f}", file=sys.stderr)
"""


def run_child(kind, method, no_jit):
    env = dict(os.environ)
    env.pop("SIRTIMES_NO_JIT", None)
    if no_jit:
        env["SIRTIMES_NO_JIT"] = "1"
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, kind, method, str(NX), str(NY)],
        capture_output=True,
        env=env,
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr.decode())
        raise SystemExit(f"child failed: kind={kind} method={method} no_jit={no_jit}")
    elapsed = float(proc.stderr.decode().strip().splitlines()[-1])
    return elapsed, proc.stdout


# First jitted call compiles (cached on disk afterwards) - don't count it.
print("Warming up both modes...")
t0 = time.time()
run_child("u", "integral", no_jit=False)
run_child("u", "integral", no_jit=True)
print(f"warmup: {time.time() - t0:.1f}s\n")

print(f"Benchmark: {NX}x{NY} grid ({NX * NY} nodes), beta=2 gamma=3 mu=1, 1 thread")
print(f"{'method':>10}  {'time':>4}  {'python (s)':>10}  {'jit (s)':>8}  {'speedup':>8}  {'match':>6}")
print("-" * 58)

for method in ("integral", "ode"):
    for kind in ("u", "v"):
        t_py, out_py = run_child(kind, method, no_jit=True)
        t_jit, out_jit = run_child(kind, method, no_jit=False)
        match = "ok" if out_py == out_jit else "DIFFER"
        speedup = t_py / t_jit
        print(f"{method:>10}  {kind:>4}  {t_py:>10.3f}  {t_jit:>8.3f}  {speedup:>7.1f}x  {match:>6}")
