#!/usr/bin/env python3
"""Tail-bound battery: full binary and heavy-tailed degree statistics at
n in {127, 1023}, Monte Carlo tails against the closed-form bounds.

Every emitted verdict must pass; the bounds are finite-n theorems, so any
failure is a bug rather than noise.
"""

import argparse
import os
import sys

from arbor.harness import (full_binary_statistics, heavy_tailed_statistics,
                           run_tail_sweep)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=17)
    ap.add_argument("--sizes", type=int, nargs="+", default=[127, 1023])
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    ok = True
    for n in args.sizes:
        for label, stats in (("binary", full_binary_statistics(n)),
                             ("heavy", heavy_tailed_statistics(n))):
            report = run_tail_sweep(stats, replications=args.reps,
                                    seed=args.seed)
            base = f"{args.out_dir}/tails_{label}_{n}"
            report.write(base)
            status = "pass" if report.passed else "FAIL"
            print(f"{label} n={n}: {len(report.cells)} cells {status} "
                  f"({report.wall_clock_seconds:.1f}s) -> {base}.json")
            ok = ok and report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
