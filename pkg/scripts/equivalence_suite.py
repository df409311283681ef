#!/usr/bin/env python3
"""Run the exhaustive small-n equivalence suite and write its report.

Checks enumeration counts against the closed-form count, the threshold
sampler law against the mark-height law, and spine-prefix probabilities
against enumeration ratios, for every degree statistics up to --max-n.
"""

import argparse
import sys

from arbor.harness import run_equivalence_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--out", default="equivalence_report")
    args = ap.parse_args()
    report = run_equivalence_suite(args.max_n)
    json_path, csv_path = report.write(args.out)
    bad = [c for c in report.cells if not c.verdict]
    print(f"{len(report.cells)} cells, {len(bad)} failing -> {json_path}")
    for cell in bad:
        print(f"  FAIL {cell.grid_value}: {cell.empirical} vs {cell.bound}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
