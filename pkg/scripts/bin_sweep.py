#!/usr/bin/env python3
"""Discretization sweep: protocol quality as a function of the bin count.

For each bin count, runs the full protocol on a 5-point grid of
state/measurement angles and reports the worst Born-rule error, the mean
code length, and the round-1 acceptance rate.  The Born error shrinks like
1/bins while the cost stays flat, which is why the default bin count can
be generous.
"""

from __future__ import annotations

import argparse

import numpy as np

from kschannel import run_trials
from kschannel.protocol import ks_bin_masses
from kschannel.rngstream import mix


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--trials", type=int, default=50_000)
    parser.add_argument("--bins", type=int, nargs="+", default=[4, 16, 64, 256, 1024, 4096])
    args = parser.parse_args()

    dots = (-1.0, -0.5, 0.0, 0.5, 1.0)
    print(f"{'bins':>6}  {'worst Born err':>14}  {'mean bits':>9}  "
          f"{'P(k=1)':>8}  {'binned 7/16':>11}")
    for bins in args.bins:
        worst = 0.0
        bits = []
        first = []
        for dot in dots:
            direction = (float(np.sqrt(max(0.0, 1.0 - dot * dot))), 0.0, float(dot))
            batch = run_trials(mix(args.seed, bins), args.trials, bins,
                               state=(0.0, 0.0, 1.0), meas=direction)
            worst = max(worst, abs(float(np.mean(batch.outcome == 1)) - float(batch.born[0])))
            bits.append(batch.code_bits)
            first.append(np.mean(batch.accepted_index == 1))
        binned = float(np.minimum(1.0 / bins, ks_bin_masses(bins)).sum())
        print(f"{bins:>6}  {worst:>14.5f}  {float(np.mean(np.concatenate(bits))):>9.4f}  "
              f"{float(np.mean(first)):>8.4f}  {binned:>11.6f}")


if __name__ == "__main__":
    main()
