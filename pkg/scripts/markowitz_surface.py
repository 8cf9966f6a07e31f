"""Optimal asset-A weight of the two-asset Markowitz model over (mu_B, lambda).

This is the no-learning analogue of the technology share surface; the
weight is continuous in mu_B for every lambda > 0.

    python scripts/markowitz_surface.py [--steps 101] [--out markowitz_surface.csv]
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from techfolio.analysis import MarkowitzAsset, markowitz_weight


def surface(mu_A=0.5, s_A=1.0, s_B=1.1, steps=101):
    rows = []
    for mu_B in np.linspace(0.0, 1.0, steps):
        for lam in np.linspace(0.0, 1.0, steps):
            w, tie = markowitz_weight(MarkowitzAsset(mu_A, s_A), MarkowitzAsset(float(mu_B), s_B), float(lam))
            rows.append((float(mu_B), float(lam), w, int(tie)))
    return rows


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=101)
    parser.add_argument("--out", default="-")
    args = parser.parse_args(argv)
    fh = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["mu_B", "lambda", "weight_A", "tie"])
    for mu_B, lam, w, tie in surface(steps=args.steps):
        writer.writerow([repr(mu_B), repr(lam), repr(w), tie])
    if fh is not sys.stdout:
        fh.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
