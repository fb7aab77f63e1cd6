#!/usr/bin/env python3
"""Deficit sweep over an area-preserving ellipse family.

Usage: python3 scripts/sweep_ellipses.py [--check quantitative] [--q 1.0]
       [--beta 1.0] [--a-max 1.5] [--steps 10] [--csv out.csv]
"""

import argparse

import numpy as np

from robinlab import inequalities as ineq


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", default="quantitative", choices=ineq.CHECKS)
    ap.add_argument("--q", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=1.0)
    ap.add_argument("--a-max", type=float, default=1.5)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--csv", default="")
    args = ap.parse_args()

    grid = np.linspace(1.05, args.a_max, args.steps)
    sw = ineq.sweep("ellipse", grid, args.check, q=args.q, beta=args.beta)
    print(f"{'a':>6} {'asym':>10} {'lhs':>14} {'deficit':>14} {'tol':>10}  verdict")
    for row in sw.rows:
        verdict = "pass" if row["passed"] else "FAIL"
        print(
            f"{row['param']:6.3f} {row['asymmetry']:10.5f} {row['lhs']:14.6e}"
            f" {row['deficit']:14.6e} {row['tolerance']:10.2e}  {verdict}"
        )
    print(f"{sw.n_pass}/{len(sw.rows)} passed")
    if sw.empirical_constant is not None:
        print(f"empirical constant min(lhs / asym^2) = {sw.empirical_constant:.6f}")
    if sw.notes:
        print(f"notes: {sw.notes}")
    if args.csv:
        ineq.sweep_to_csv(sw, args.csv)
        print(f"wrote {args.csv}")


if __name__ == "__main__":
    main()
