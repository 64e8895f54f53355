"""Time the hot kernels under numba and under the pure-numpy fallback.

Each backend runs in its own interpreter (the backend is fixed at import
time by TPHT_DISABLE_NUMBA).  Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _time(fn, repeat):
    fn()  # warm-up (JIT compile on the numba side)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_cases(repeat):
    from tpht import backend, is_totally_positive, tpht_band, tpht_truncation
    from tpht.matrices import initial_minors
    from tpht.ensemble import DistSpec, ks_distance, lhs_moment_batch, rhs_moment_batch, sample_roots_batch
    from tpht.spectra import esd_moment

    rng = np.random.default_rng(0)
    roots = sample_roots_batch(DistSpec("lognormal", 3), 1729, 0, 256)
    band = tpht_band([1, 1, 1], 10_000)
    A8 = tpht_truncation([1, 1, 1], 8)
    A60 = tpht_truncation(rng.uniform(0, 2, 4), 60)
    x, y = rng.standard_normal(100_000), rng.standard_normal(100_000)

    cases = {
        "trace p=3, n=10000": lambda: esd_moment(band, 3),
        "lhs batch 256 x n=100, p=5": lambda: lhs_moment_batch(roots, 100, 5),
        "rhs batch 256, p=5": lambda: rhs_moment_batch(roots, 5),
        "exhaustive TP n=8": lambda: is_totally_positive(A8),
        "initial minors n=60": lambda: initial_minors(A60),
        "two-sample KS 1e5": lambda: ks_distance(x, y),
    }
    return backend(), {name: _time(fn, repeat) for name, fn in cases.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        name, times = run_cases(args.repeat)
        print(json.dumps({"backend": name, "times": times}))
        return

    results = {}
    for disable in ("0", "1"):
        env = dict(os.environ, TPHT_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
            env=env, check=True, capture_output=True, text=True,
        ).stdout
        rec = json.loads(out.strip().splitlines()[-1])
        results[rec["backend"]] = rec["times"]

    jit, ref = results.get("numba", {}), results.get("numpy", {})
    print(f"{'kernel':32s} {'numba [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}")
    for k in ref:
        a, b = jit.get(k, float("nan")), ref[k]
        print(f"{k:32s} {a:11.5f} {b:11.5f} {b / a:8.1f}x")


if __name__ == "__main__":
    main()
