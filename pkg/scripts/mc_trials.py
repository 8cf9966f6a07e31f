"""Repeat the Monte Carlo oracle over many seeds and count 3-SE agreements.

    python scripts/mc_trials.py [--trials 100] [--n 1000000]

Prints, per parameter set and quantity, how many seeds agree with the
analytic value within ``--n-se`` standard errors.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter

from techfolio.curves import MarketSpec
from techfolio.montecarlo import oracle_checks
from techfolio.presets import CHALLENGER_B, INCUMBENT_A, SIMILAR_A, similar_B


def cases():
    B = similar_B(0.65)
    yield "similar/one-period", SIMILAR_A, B, MarketSpec(2.0, 0.25), (1.0,)
    yield "incumbent/one-period", INCUMBENT_A, CHALLENGER_B, MarketSpec(30.0, 0.5), (15.0,)
    yield (
        "incumbent/two-period",
        INCUMBENT_A,
        CHALLENGER_B,
        MarketSpec(30.0, 0.5, discount_r=1.0, periods=2),
        (15.0, 15.0),
    )
    yield (
        "similar/two-period",
        SIMILAR_A,
        B,
        MarketSpec(2.0, 0.25, discount_r=0.1, periods=2),
        (1.0, 1.0),
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--n-se", type=float, default=3.0)
    args = parser.parse_args(argv)
    for name, A, B, m, shares in cases():
        hits = Counter()
        for seed in range(args.trials):
            for check in oracle_checks(A, B, m, shares, args.n, seed):
                hits[check.quantity] += check.estimate.agrees(check.analytic, args.n_se)
        for q, k in hits.items():
            print(f"{name:22s} {q:10s} {k:4d}/{args.trials}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
