#!/usr/bin/env python3
"""Profile the ratio-step schedule: checks, key statistics, and a CSV trace.

Prints the verification battery for the chosen number of doubling pairs and
writes k, a_k, b_k, g_k rows over the small-k range where the profile is
informative (the burst and its surroundings).

    python3 scripts/counterexample_profile.py
    python3 scripts/counterexample_profile.py --pairs 10 --k-max 512 --out /tmp
"""

import argparse
import sys

from carleman.counterexample import counterexample_sequence, full_verification
from carleman.reports import output_dir, write_csv


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=8)
    ap.add_argument("--k-max", type=int, default=256)
    ap.add_argument("--out", default=None, help="output directory")
    args = ap.parse_args(argv)

    report = full_verification(args.pairs)
    seq = counterexample_sequence(args.pairs)
    for name, body in report["checks"].items():
        print(f"{'ok ' if body['ok'] else 'FAIL'} {name}")
    print(f"entries: {report['entry_count']}  doubled pairs: {report['doubled_count']}")
    print(f"last entry: ~10^{report['last_entry_digits']:.0f}")
    w = report["checks"]["strict-gap-window"]
    print(f"gap ratio: g(1) = {w['g_at_1']}, min over the window "
          f"{w['g_min']:.6f} at k = {w['g_min_at']}")
    d = report["checks"]["difference-closedness"]
    print(f"step root: max b = {d['max_b']:.6f} at k = {d['argmax']} (bound {d['bound']})")
    s = report["checks"]["gap-sums"]
    print(f"gap-certificate sum: {s['sum']:.4f} (target {s['target']:.1f})")

    rows = [(k, seq.level(k), seq.b(k), seq.g(k)) for k in range(1, args.k_max + 1)]
    path = write_csv(output_dir(args.out) / "counterexample_profile.csv",
                     ("k", "a_k", "b_k", "g_k"), rows)
    print(f"profile: {path}")
    return 0 if report["all_ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
