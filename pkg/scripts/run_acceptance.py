#!/usr/bin/env python3
"""Run every acceptance check and write a JSON summary.

usage: python3 scripts/run_acceptance.py [--level quick|full] [--out results.json]
"""

import argparse
import json
import sys

from bkkernel.selftest import run_selftest


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--level", choices=("quick", "full"), default="full")
    parser.add_argument("--out", default="")
    args = parser.parse_args()

    results = run_selftest(args.level)
    for r in results:
        print(r.line())
    ok = all(r.passed for r in results)
    print(f"{sum(r.passed for r in results)}/{len(results)} passed")
    if args.out:
        payload = {"level": args.level, "pass": ok, "results": [r.to_json() for r in results]}
        with open(args.out, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
