"""Evaluate the proof chain on a fine angle grid and summarize the violation.

    python scripts/chain_landscape.py --step 1 --out landscape.csv
"""
import argparse
import math

from noclone.proofchain import scan, scan_to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=1.0, help="grid step in degrees")
    ap.add_argument("--out", default=None, help="CSV destination (optional)")
    args = ap.parse_args()

    n = int(90 / args.step)
    grid = [math.radians(k * args.step) for k in range(1, n) if k * args.step < 90]
    rows = scan(grid, grid)
    worst = min(rows, key=lambda r: r.L6)
    print(f"cells: {len(rows)}  all chain checks ok: {all(r.chain_ok for r in rows)}")
    print(f"all L6 < 0: {all(r.L6 < 0 for r in rows)}")
    print(f"most negative L6 = {worst.L6:.10f} at "
          f"({math.degrees(worst.theta):.2f}, {math.degrees(worst.theta_prime):.2f}) deg")
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(scan_to_csv(rows))


if __name__ == "__main__":
    main()
