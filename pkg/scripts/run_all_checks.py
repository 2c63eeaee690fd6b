#!/usr/bin/env python3
"""Run every acceptance criterion and print one line per result.

Exit status is nonzero if any criterion fails its checks or its time budget.
A JSON report is written next to the other tool reports.

    python3 scripts/run_all_checks.py
    python3 scripts/run_all_checks.py --only 1,6,9 --out /tmp/reports
"""

import argparse
import sys

from carleman.acceptance import run_all
from carleman.reports import ReportBuilder, output_dir


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", default=None,
                    help="comma-separated criterion indices (default: all)")
    ap.add_argument("--out", default=None, help="report directory")
    args = ap.parse_args(argv)

    only = [int(t) for t in args.only.split(",") if t] if args.only else None
    results = run_all(only)
    rb = ReportBuilder("run-all-checks", {"only": only, "seed": None})
    for r in results:
        print(r.line())
        rb.add(r.name, r.ok and r.in_budget,
               {"seconds": round(r.seconds, 3), "budget": r.budget, "detail": r.detail})
    path = rb.write(output_dir(args.out) / "run_all_checks.json")
    total = sum(r.seconds for r in results)
    n_ok = sum(1 for r in results if r.ok and r.in_budget)
    print(f"{n_ok}/{len(results)} criteria passed in {total:.1f}s -> {path}")
    return 0 if n_ok == len(results) else 1


if __name__ == "__main__":
    sys.exit(main())
