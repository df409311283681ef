#!/usr/bin/env python3
"""Scaling-trend ladders: heavy-tailed growth, finite-variance control, and
the near-path depth constant.

heavy:     subcritical mu(k) ~ k^(-5/2), sizes 200/800/3200; expects
           wid/sqrt(n) strictly increasing and ht/(sqrt(n) log^3 n)
           strictly decreasing.
control:   mu = {0: 1/2, 2: 1/2} at odd sizes; expects no doubling of
           wid/sqrt(n) across the ladder.
near-path: mu(1) = 1-eps family at n = 2000; expects the scaled depth
           constant to vary by less than a factor of two over eps.
"""

import argparse
import os
import sys

from arbor.harness import run_convergence


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--families", nargs="+",
                    default=["heavy", "control", "near-path"],
                    choices=("heavy", "control", "near-path"))
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    ok = True
    for family in args.families:
        report = run_convergence(family=family, replications=args.reps,
                                 seed=args.seed)
        base = f"{args.out_dir}/converge_{family.replace('-', '_')}"
        report.write(base)
        status = "pass" if report.passed else "FAIL"
        trend = [c for c in report.cells
                 if "trend" in str(c.grid_value) or "span" in str(c.grid_value)
                 or "spread" in str(c.grid_value)]
        summary = ", ".join(f"{c.grid_value}={c.empirical:.3f}" for c in trend)
        print(f"{family}: {status} ({summary}) "
              f"({report.wall_clock_seconds:.1f}s) -> {base}.json")
        ok = ok and report.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
