"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import bench
from .analysis import flatten_embeddings, ot_barycenter, pca
from .data import add_noise, gaussian_corpus, make_rng
from .embeddings import LoptEmbedding, LotEmbedding, lopt_discrepancy, lopt_embed, lot_discrepancy, lot_embed
from .errors import InputError, NumericalError
from .interpolation import MODES, curve
from .io import read_json, read_measure, write_curve, write_json, write_measure
from .projections import opt_barycentric_projection, ot_barycentric_projection
from .solver_opt import solve_opt
from .solver_ot import solve_ot

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(obj, out: str | None):
    if out:
        write_json(obj, out)
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_generate_gaussians(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    measures, reference, means = gaussian_corpus(args.n, args.k, args.seed)
    for i, mu in enumerate(measures):
        write_measure(mu, out / f"measure_{i:03d}.csv")
    write_measure(reference, out / "reference.csv")
    write_json({"n": args.n, "k": args.k, "seed": args.seed, "means": means.tolist(),
                "reference_mean": means.mean(axis=0).tolist() if args.k > 1 else means[0].tolist()},
               out / "params.json")


def cmd_add_noise(args):
    mu = read_measure(args.input)
    box = None
    if args.box:
        vals = _floats(args.box)
        if len(vals) != 2 * mu.dim:
            raise InputError(f"--box needs {2 * mu.dim} numbers (low corner then high corner)")
        box = (vals[: mu.dim], vals[mu.dim:])
    write_measure(add_noise(mu, args.eta, make_rng(args.seed), box), args.out)


def cmd_solve_ot(args):
    sol = solve_ot(read_measure(args.source), read_measure(args.target))
    _emit({"cost": sol.cost, "plan": sol.plan.to_json()}, args.out)


def cmd_solve_opt(args):
    sol = solve_opt(read_measure(args.source), read_measure(args.target), args.lam)
    _emit({
        "cost": sol.cost,
        "lambda": args.lam,
        "transported_mass": sol.transported_mass,
        "destroyed_mass": sol.destroyed_mass,
        "created_mass": sol.created_mass,
        "plan": sol.plan.to_json(),
    }, args.out)


def cmd_project(args):
    ref, tgt = read_measure(args.reference), read_measure(args.target)
    if args.lam is None:
        proj = ot_barycentric_projection(ref, tgt, solve_ot(ref, tgt).plan)
    else:
        proj = opt_barycentric_projection(ref, tgt, solve_opt(ref, tgt, args.lam).plan)
    write_measure(proj.measure, args.out)
    print(json.dumps({"deficit": proj.deficit}))


def cmd_embed(args):
    ref, tgt = read_measure(args.reference), read_measure(args.target)
    emb = lot_embed(ref, tgt) if args.lam is None else lopt_embed(ref, tgt, args.lam)
    _emit(emb.to_json(), args.out)


def _load_embedding(path):
    obj = read_json(path)
    return LoptEmbedding.from_json(obj) if "p_hat" in obj else LotEmbedding.from_json(obj)


def cmd_discrepancy(args):
    ref = read_measure(args.reference)
    a, b = _load_embedding(args.a), _load_embedding(args.b)
    if type(a) is not type(b):
        raise InputError("cannot compare a LOT embedding with a LOPT embedding")
    if isinstance(a, LoptEmbedding):
        value = lopt_discrepancy(a, b, ref, args.include_deficit)
    else:
        value = lot_discrepancy(a, b, ref)
    _emit({"discrepancy": value}, args.out)


def cmd_interpolate(args):
    mode = args.mode.replace("-", "_")
    ref = read_measure(args.reference) if args.reference else None
    src, tgt = read_measure(args.source), read_measure(args.target)
    frames = curve(mode, src, tgt, args.ts, ref, args.lam)
    write_curve(frames, args.ts, args.out, mode, args.lam)


def cmd_barycenter(args):
    measures = [read_measure(p) for p in args.inputs]
    if args.normalize:
        measures = [m.normalized() for m in measures]
    bary, info = ot_barycenter(measures, args.support_size, args.iters, args.seed, log=True)
    if args.mass != 1.0:
        bary = bary.normalized(args.mass)
    write_measure(bary, args.out)
    write_json({"objective": info["objective"], "seed": args.seed, "iters": args.iters,
                "support_size": args.support_size, "mass": args.mass}, str(args.out) + ".json")


def cmd_pca(args):
    ref = read_measure(args.reference)
    embs = [_load_embedding(p) for p in args.embeddings]
    for e in embs:
        if e.reference_id != ref.fingerprint():
            raise InputError("embedding was built against a different reference")
    res = pca(flatten_embeddings([e.u for e in embs]), ref.weights, args.components)
    lines = [",".join([f"pc{c + 1}" for c in range(args.components)] + ["label"])]
    for path, row in zip(args.embeddings, res.projections):
        lines.append(",".join([repr(float(v)) for v in row] + [Path(path).stem]))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_bench_relative_error(args):
    records, skipped = bench.relative_error_experiment(args.n, args.k, args.lambdas, args.trials, args.seed)
    params = {"n": args.n, "k": args.k, "lambdas": args.lambdas, "trials": args.trials, "seed": args.seed,
              "include_deficit": True, "skipped_zero_opt_pairs": skipped}
    bench.write_records(records, args.out, params)


def cmd_bench_timing(args):
    records = []
    for k in args.k:
        records += bench.timing_experiment(args.n, k, args.lam, args.seed)
    bench.write_records(records, args.out, {"n": args.n, "k": args.k, "lambda": args.lam, "seed": args.seed})


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lopt", description="Exact OT/OPT, LOT/LOPT embeddings and interpolation.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("generate-gaussians", help="sample K sqrt(3)-mean Gaussian point sets and a reference")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_generate_gaussians)

    s = sub.add_parser("add-noise", help="append uniform noise atoms of weight 1/N")
    s.add_argument("input")
    s.add_argument("--eta", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--box", help="low corner then high corner, comma separated; write --box=-1,-1,1,1 for negative values (default: bounding box)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_add_noise)

    for name, func, partial in (("solve-ot", cmd_solve_ot, False), ("solve-opt", cmd_solve_opt, True)):
        s = sub.add_parser(name)
        s.add_argument("source")
        s.add_argument("target")
        if partial:
            s.add_argument("--lambda", dest="lam", type=float, required=True)
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("project", help="barycentric projection of a target onto the reference support")
    s.add_argument("target")
    s.add_argument("--reference", required=True)
    s.add_argument("--lambda", dest="lam", type=float, help="use the OPT projection with this lambda")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("embed", help="LOT embedding, or LOPT with --lambda")
    s.add_argument("target")
    s.add_argument("--reference", required=True)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--out")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("discrepancy", help="LOT/LOPT discrepancy between two embedding files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--reference", required=True)
    s.add_argument("--include-deficit", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_discrepancy)

    s = sub.add_parser("interpolate")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--mode", required=True, choices=list(MODES) + [m.replace("_", "-") for m in MODES])
    s.add_argument("--reference")
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--ts", type=_floats, default=[0.0, 0.25, 0.5, 0.75, 1.0])
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_interpolate)

    s = sub.add_parser("barycenter", help="free-support OT barycenter (unit mass unless --mass)")
    s.add_argument("inputs", nargs="+")
    s.add_argument("--support-size", type=int, required=True)
    s.add_argument("--iters", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--normalize", action="store_true", help="rescale inputs to unit mass first")
    s.add_argument("--mass", type=float, default=1.0, help="total mass of the written barycenter")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_barycenter)

    s = sub.add_parser("pca", help="PCA over embedding files; CSV columns pc1..pcC,label")
    s.add_argument("embeddings", nargs="+")
    s.add_argument("--reference", required=True)
    s.add_argument("--components", type=int, default=2)
    s.add_argument("--out")
    s.set_defaults(func=cmd_pca)

    b = sub.add_parser("bench").add_subparsers(dest="bench_command", required=True)
    s = b.add_parser("relative-error")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--k", type=int, default=2)
    s.add_argument("--lambdas", type=_floats, default=[0.5, 1.0, 5.0, 10.0, 20.0])
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_bench_relative_error)

    s = b.add_parser("timing")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--k", type=lambda t: [int(x) for x in _floats(t)], default=[4, 8, 12])
    s.add_argument("--lambda", dest="lam", type=float, default=5.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_bench_timing)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
