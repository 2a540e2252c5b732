"""Paired (common random numbers) comparison of swarm-best policies at t = T.

Runs with the same index share every random stream, so per-run differences
cancel most of the Monte-Carlo noise that separate estimates carry.

    python3 scripts/policy_pairing.py --rate 0.1 --runs 1000
"""

import argparse

import numpy as np

from trustpso.batch import simulate_runs
from trustpso.harness import figure_grid

POLICIES = ("binary-rejection", "hyperbolic", "stochastic")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rate", type=float, default=0.1)
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    tag = f"r{round(args.rate * 100)}"
    grid = {s.name: s for _, s in figure_grid("fig4", args.runs, args.seed)}
    for model in ("zero-distance", "random-distance"):
        final = {p: simulate_runs(grid[f"fig4_{model}_{p}_{tag}"], range(args.runs))[:, -1, 0]
                 for p in POLICIES}
        print(f"{model} at rate {args.rate}:")
        for p in POLICIES:
            print(f"  {p:<17} mean {final[p].mean():.3f}")
        for a, b in (("hyperbolic", "binary-rejection"), ("stochastic", "hyperbolic")):
            diff = final[a] - final[b]
            se = diff.std(ddof=1) / np.sqrt(len(diff))
            print(f"  {a} - {b}: {diff.mean():+.4f} +/- {se:.4f} (paired SE)")


if __name__ == "__main__":
    main()
