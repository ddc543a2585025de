#!/usr/bin/env python3
"""Compare geometric and spectral kernels for the bundled weight matrices.

usage: python3 scripts/kernel_sweep.py [--q 3 5] [--tol 1e-6]
"""

import argparse
import sys
import time
from pathlib import Path

from bkkernel.chartab import dixon_table
from bkkernel.errors import BudgetError
from bkkernel.group import ClassTable, StandardGroupSpec
from bkkernel.transfer import RhoFlatSpec, compare_kernels

WEIGHTS = Path(__file__).parent / "weights"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--q", type=int, nargs="+", default=[2, 3, 5])
    parser.add_argument("--tol", type=float, default=1e-6)
    args = parser.parse_args()

    failed = 0
    print(f"{'group':<10} {'weights':<14} {'max_dev':>10} {'time':>7}  verdict")
    for q in args.q:
        for path in sorted(WEIGHTS.glob("*.txt")):
            n = int(path.stem.split("_gl")[-1])
            spec = StandardGroupSpec.gl(n, q)
            try:
                table = ClassTable(spec)
            except BudgetError as exc:
                print(f"{str(spec):<10} {path.stem:<14} skipped ({exc})")
                continue
            start = time.perf_counter()
            rep = compare_kernels(RhoFlatSpec.from_file(spec, path), table, dixon_table(table), tol=args.tol)
            verdict = "PASS" if rep.passed else "FAIL"
            failed += not rep.passed
            print(f"{str(spec):<10} {path.stem:<14} {rep.max_dev:>10.2e} {time.perf_counter() - start:>6.2f}s  {verdict}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
