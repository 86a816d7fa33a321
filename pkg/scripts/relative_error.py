"""Mean pairwise |OPT - LOPT| / OPT across a lambda sweep on sqrt(3)-mean Gaussians.

    python scripts/relative_error.py --n 100 --k 2 --trials 10 --out results/relative_error.csv
"""

import argparse
import logging
from collections import defaultdict

import numpy as np

from lopt.bench import relative_error_experiment, write_records


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--lambdas", default="0.5,1,5,10,20")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/relative_error.csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    lambdas = [float(x) for x in args.lambdas.split(",")]
    records, skipped = relative_error_experiment(args.n, args.k, lambdas, args.trials, args.seed)
    write_records(records, args.out, {**vars(args), "lambdas": lambdas, "skipped_zero_opt_pairs": skipped})

    by_lam = defaultdict(list)
    for r in records:
        by_lam[r.lam].append(r.value)
    print("lambda  mean      std")
    for lam in lambdas:
        v = np.array(by_lam[lam])
        print(f"{lam:6g}  {np.nanmean(v):.5f}  {np.nanstd(v):.5f}")


if __name__ == "__main__":
    main()
