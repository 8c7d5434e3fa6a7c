"""Wall-clock comparison of the numba and NumPy Newton backends.

Runs the brute-force solver on a representative workload with both
kernels (after an unmeasured numba warm-up) and reports timings plus the
number of distinct roots found, which must agree.

Run:

    python benchmarks/bench_oracle.py [--starts 6000] [--repeats 3]
"""

import argparse
import statistics
import time

from beamforge import Params, Spectrum
from beamforge.kernels import HAVE_NUMBA
from beamforge.oracle import galerkin_solve


def time_backend(p, spec, n_modes, starts, backend, repeats):
    durations = []
    found = None
    for rep in range(repeats):
        t0 = time.perf_counter()
        result = galerkin_solve(p, spec, n_modes, starts, seed=0, backend=backend)
        durations.append(time.perf_counter() - t0)
        if found is None:
            found = len(result.found)
    return {
        "backend": backend,
        "mean": statistics.mean(durations),
        "std": statistics.pstdev(durations) if len(durations) > 1 else 0.0,
        "found": found,
        "durations": durations,
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--starts", type=int, default=6000)
    ap.add_argument("--modes", type=int, default=3)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    p = Params(beta=-15.5, varrho=1.0, k=3.0)
    spec = Spectrum.scaled()

    if HAVE_NUMBA:
        print("[warmup] one unmeasured numba run (JIT compile)")
        galerkin_solve(p, spec, 2, 64, seed=0, backend="numba")
    else:
        print("[info] numba not installed; benchmarking the NumPy path only")

    rows = [time_backend(p, spec, args.modes, args.starts, "numpy", args.repeats)]
    if HAVE_NUMBA:
        rows.append(time_backend(p, spec, args.modes, args.starts, "numba", args.repeats))

    print(f"\nworkload: modes={args.modes} starts={args.starts} repeats={args.repeats}")
    print(f"{'backend':8s} {'mean(s)':>9s} {'std(s)':>8s} {'roots':>6s}  durations")
    for row in rows:
        durs = ", ".join(f"{d:.3f}" for d in row["durations"])
        print(f"{row['backend']:8s} {row['mean']:9.3f} {row['std']:8.3f} {row['found']:6d}  [{durs}]")

    if len(rows) == 2:
        if rows[0]["found"] != rows[1]["found"]:
            print("[warn] backends disagree on the root count")
        speedup = rows[0]["mean"] / rows[1]["mean"] if rows[1]["mean"] > 0 else float("inf")
        print(f"\nspeedup (numpy / numba): {speedup:.2f}x")


if __name__ == "__main__":
    main()
