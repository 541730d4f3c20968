#!/usr/bin/env python3
"""Compare the gmpy2 and fractions rational backends on the exact hot paths.

The heavy work in this package is arbitrary-precision rational arithmetic
(recurrence generation, banded-operator images, the exact Gram matrix), so
the backend choice, not Python-level structure, sets the runtime.  This
script times both backends in subprocesses (the backend is chosen at import
via CHEBSYS_RATIONAL_BACKEND) and prints a side-by-side table.

Usage: python benchmarks/bench_rational_backends.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import chebsys as cs

results = {"backend": cs.BACKEND}

t0 = time.perf_counter()
for m in (1, 2, 3, 4, 5):
    for c in ("1", "1/2", "3"):
        cs.gen_type1_records(cs.Params(m, c), 120)
results["recurrence_records_r120"] = time.perf_counter() - t0

t0 = time.perf_counter()
for m in (1, 2, 3):
    for c in ("1", "3/2"):
        p = cs.Params(m, c)
        gram = cs.gram_matrix(p, 40, 40, size=43 + m)
        assert all(
            gram[r][n] == (1 if n == r else 0)
            for r in range(41) for n in range(41)
        )
results["gram_41x41_six_configs"] = time.perf_counter() - t0

t0 = time.perf_counter()
p = cs.Params(2, "3/2")
for r in range(41):
    assert cs.jump_check_typeI(p, r)
for n in range(41):
    assert cs.jump_check_typeII(p, n)
results["jump_checks_to_40"] = time.perf_counter() - t0

print(json.dumps(results))
"""


def run_backend(backend: str) -> dict:
    env = dict(os.environ, CHEBSYS_RATIONAL_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True
    )
    if out.returncode != 0:
        raise RuntimeError(f"{backend} run failed:\n{out.stderr}")
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> None:
    rows = []
    for backend in ("gmpy2", "fractions"):
        try:
            rows.append(run_backend(backend))
        except RuntimeError as exc:
            print(f"skipping {backend}: {exc}")
    if not rows:
        return
    keys = [k for k in rows[0] if k != "backend"]
    width = max(len(k) for k in keys)
    header = "workload".ljust(width) + "".join(
        f"  {row['backend']:>12}" for row in rows
    )
    print(header)
    print("-" * len(header))
    for key in keys:
        line = key.ljust(width)
        for row in rows:
            line += f"  {row[key]:>11.3f}s"
        print(line)
    if len(rows) == 2:
        print()
        for key in keys:
            speedup = rows[1][key] / max(rows[0][key], 1e-9)
            print(f"{key}: {rows[0]['backend']} is {speedup:.1f}x faster")


if __name__ == "__main__":
    main()
