#!/usr/bin/env python3
"""Median timings of the matching-sum and elimination Pfaffians per matrix size.

Writes the raw CSV from ``symspec bench`` and prints a summary table.
"""

import argparse
import csv
import statistics
import sys
from collections import defaultdict

from symspec.cli import main as symspec_main


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--field", default="q")
    ap.add_argument("--sizes", default="4,6,8,10,12")
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default="bench.csv")
    args = ap.parse_args(argv)

    code = symspec_main(["bench", "--field", args.field, "--sizes", args.sizes, "--samples", str(args.samples),
                         "--seed", str(args.seed), "--output", args.csv])
    times = defaultdict(list)
    agree = True
    with open(args.csv, newline="") as fh:
        for row in csv.DictReader(fh):
            times[int(row["size"]), row["algorithm"]].append(float(row["seconds"]))
            agree &= row["agree"] == "True"

    print(f"{'2n':>4} {'matching (s)':>14} {'elimination (s)':>16} {'ratio':>8}")
    for size in sorted({s for s, _ in times}):
        m = statistics.median(times[size, "matching"])
        e = statistics.median(times[size, "elimination"])
        print(f"{size:>4} {m:>14.6f} {e:>16.6f} {m / e:>8.1f}")
    print("all inputs agree" if agree else "DISAGREEMENT between algorithms")
    return code


if __name__ == "__main__":
    sys.exit(main())
