"""Write frames of all four interpolation modes between two Gaussian point sets."""

import argparse
from pathlib import Path

import numpy as np

from lopt.data import add_noise, gaussian_corpus, make_rng
from lopt.interpolation import MODES, curve
from lopt.io import write_curve, write_measure


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=40)
    p.add_argument("--lam", type=float, default=2.0)
    p.add_argument("--eta", type=float, default=0.25, help="noise added to the target")
    p.add_argument("--frames", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="results/interpolation")
    args = p.parse_args()

    (src, tgt), reference, _ = gaussian_corpus(args.n, 2, args.seed)
    noisy = add_noise(tgt, args.eta, make_rng(args.seed, 99))
    ts = np.linspace(0.0, 1.0, args.frames).tolist()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_measure(src, out / "source.csv")
    write_measure(noisy, out / "target.csv")
    write_measure(reference, out / "reference.csv")
    for mode in MODES:
        balanced = mode in ("ot_geodesic", "lot_geodesic")
        target = noisy.normalized(src.mass) if balanced else noisy
        frames = curve(mode, src, target, ts, reference, None if balanced else args.lam)
        write_curve(frames, ts, out / mode, mode, None if balanced else args.lam)
        masses = [f.mass for f in frames]
        print(f"{mode:13s} mass {masses[0]:.3f} -> {masses[-1]:.3f}")


if __name__ == "__main__":
    main()
