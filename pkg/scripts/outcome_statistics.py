#!/usr/bin/env python3
"""Convergence of empirical outcome frequencies toward their Born values.

Runs protocol rounds at increasing counts and prints the worst deviation of
the king's outcome frequencies from 1/3 and of the physicist's final-outcome
frequencies from 1/9 (per king basis, each of her nine outcomes is reached
through exactly one king outcome), together with the success tally.
Deviations should shrink like 1/sqrt(n) while the success column stays
pinned at 100%.
"""

import argparse

import numpy as np

from retroking import build_physicist_basis, simulate_rounds


def worst_deviations(records):
    physicist = build_physicist_basis()
    king = np.zeros((4, 3), dtype=int)
    final = np.zeros((4, 9), dtype=int)
    for r in records:
        king[r.king_basis, r.king_outcome] += 1
        final[r.king_basis, r.physicist_outcome] += 1
    king_dev = 0.0
    for m in range(4):
        total = king[m].sum()
        if total:
            king_dev = max(king_dev, np.abs(king[m] / total - 1 / 3).max())
    final_dev = 0.0
    for m in range(4):
        for k in range(3):
            compatible = [j for j in range(9) if physicist.labels[j][m] == k]
            count = final[m, compatible].sum()
            if count:
                final_dev = max(final_dev, np.abs(final[m, compatible] / king[m].sum() - 1 / 9).max())
    return king_dev, final_dev


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-rounds", type=int, default=100_000)
    args = parser.parse_args()

    print(f"{'rounds':>8}  {'king dev':>10}  {'final dev':>10}  {'success':>8}")
    rounds = 100
    while rounds <= args.max_rounds:
        records = simulate_rounds(rounds, args.seed)
        king_dev, final_dev = worst_deviations(records)
        successes = sum(r.success for r in records)
        print(f"{rounds:>8}  {king_dev:>10.4f}  {final_dev:>10.4f}  {successes / rounds:>8.2%}")
        rounds *= 10


if __name__ == "__main__":
    main()
