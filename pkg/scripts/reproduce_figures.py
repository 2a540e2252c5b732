"""Regenerate every figure grid (CSV + SVG) into one output directory.

    python3 scripts/reproduce_figures.py --out results --runs 1000 --jobs 4
"""

import argparse
import logging

from trustpso.harness import FIGURES, reproduce


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--runs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--figures", nargs="*", default=list(FIGURES))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    for fig in args.figures:
        paths = reproduce(fig, args.out, runs=args.runs, master_seed=args.seed,
                          jobs=args.jobs, plot=True, progress=logging.info)
        logging.info("%s: %d files", fig, len(paths))


if __name__ == "__main__":
    main()
