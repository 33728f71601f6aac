#!/usr/bin/env python3
"""Run every check family over a grid of (field, n, d) and write one JSON report per cell.

    python scripts/run_campaign.py --out reports --samples 20
"""

import argparse
import json
import sys
import time
from pathlib import Path

from symspec.cli import CampaignConfig, run_campaign


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", default="reports")
    ap.add_argument("--fields", default="q,fp:101,fp:1009")
    ap.add_argument("--ns", default="1,2,3")
    ap.add_argument("--ds", default="1,2,3")
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for field in args.fields.split(","):
        for n in map(int, args.ns.split(",")):
            for d in map(int, args.ds.split(",")):
                start = time.perf_counter()
                report = run_campaign(CampaignConfig(n=n, d=d, field=field, seed=args.seed, samples=args.samples))
                name = f"{field.replace(':', '')}_n{n}_d{d}.json"
                (out / name).write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")
                s = report["summary"]
                failed += s["failed"]
                print(f"{name:24s} {s['total']:6d} checks  {s['failed']:3d} failed  "
                      f"{time.perf_counter() - start:6.1f}s", flush=True)
    print("all checks passed" if not failed else f"{failed} checks failed")
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
