#!/usr/bin/env python3
"""Compare two result CSVs column by column.

Reports the max absolute and relative difference per shared numeric column
and exits 1 if any column exceeds the tolerances. Meant for diffing the
data.csv of two simulate runs, e.g. across grids or code revisions.
"""

import argparse
import csv
import math
import sys


def read_columns(path):
    with open(path, newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        sys.exit(f"{path}: empty file")
    header, data = rows[0], rows[1:]
    cols = {}
    for j, name in enumerate(header):
        try:
            cols[name] = [float(r[j]) for r in data]
        except (ValueError, IndexError):
            pass  # non-numeric or ragged column, skip
    return cols


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("left")
    ap.add_argument("right")
    ap.add_argument("--rtol", type=float, default=1e-12,
                    help="relative tolerance, scaled by the column max "
                         "(default 1e-12)")
    ap.add_argument("--atol", type=float, default=0.0,
                    help="absolute tolerance (default 0)")
    args = ap.parse_args()

    left = read_columns(args.left)
    right = read_columns(args.right)
    shared = [k for k in left if k in right]
    if not shared:
        sys.exit("no shared numeric columns")

    failed = False
    for name in shared:
        a, b = left[name], right[name]
        if len(a) != len(b):
            print(f"{name}: row count {len(a)} vs {len(b)}")
            failed = True
            continue
        diff = max((abs(x - y) for x, y in zip(a, b)), default=0.0)
        scale = max((abs(x) for x in a + b), default=0.0)
        rel = diff / scale if scale > 0.0 else 0.0
        ok = diff <= args.atol or rel <= args.rtol
        status = "ok" if ok else "DIFFERS"
        print(f"{name}: max abs diff {diff:.6g}, rel {rel:.6g}  {status}")
        failed |= not ok
        if any(math.isnan(x) != math.isnan(y) for x, y in zip(a, b)):
            print(f"{name}: NaN mismatch")
            failed = True

    only = sorted(set(left) ^ set(right))
    if only:
        print("unshared columns:", ", ".join(only))
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
