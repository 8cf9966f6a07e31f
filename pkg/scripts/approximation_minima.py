"""Global optimal share of the exact objective and its series approximations versus K.

Shows the exact and no-learning minima coinciding as K shrinks and
separating once learning matters.

    python scripts/approximation_minima.py [--alphaB 0.65] [--lam 0.25]
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from techfolio.curves import MarketSpec
from techfolio.optimizer import optimize_one_period
from techfolio.presets import SIMILAR_A, similar_B


def rows(alphaB: float, lam: float, Ks):
    B = similar_B(alphaB)
    for K in Ks:
        m = MarketSpec(demand_K=float(K), lam=lam)
        shares = [optimize_one_period(SIMILAR_A, B, m, order=o).global_share for o in (None, 0, 1)]
        yield (float(K), *shares)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--alphaB", type=float, default=0.65)
    parser.add_argument("--lam", type=float, default=0.25)
    parser.add_argument("--steps", type=int, default=61)
    args = parser.parse_args(argv)
    Ks = np.logspace(-3, 1, args.steps)
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["K", "share_exact", "share_zeroth_order", "share_first_order"])
    for r in rows(args.alphaB, args.lam, Ks):
        writer.writerow([repr(v) for v in r])
    return 0


if __name__ == "__main__":
    sys.exit(main())
