"""Wall-clock of K embeddings plus pairwise LOPT versus all pairwise OPT solves."""

import argparse
import logging

from lopt.bench import timing_experiment, write_records


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--ks", default="4,8,12")
    p.add_argument("--lam", type=float, default=5.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--out", default="results/timing.csv")
    args = p.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    ks = [int(k) for k in args.ks.split(",")]
    records = []
    for k in ks:
        for trial in range(args.repeats):
            recs = timing_experiment(args.n, k, args.lam, args.seed, trial)
            records += recs
            t = {r.method: r.value for r in recs}
            print(f"K={k:3d} trial {trial}: opt_pairwise {t['opt_pairwise']:.3f}s  lopt {t['lopt']:.3f}s  "
                  f"ratio {t['opt_pairwise'] / t['lopt']:.2f}")
    write_records(records, args.out, {**vars(args), "ks": ks})


if __name__ == "__main__":
    main()
