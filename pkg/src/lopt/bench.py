"""Benchmark harness: OPT vs LOPT relative error, wall-clock, and PCA robustness."""

from __future__ import annotations

import csv
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from itertools import combinations
from pathlib import Path

import numpy as np

from .analysis import flatten_embeddings, ot_barycenter, pca, threshold_accuracy
from .data import add_noise, blob_corpus, gaussian_corpus, make_rng
from .embeddings import lopt_discrepancy, lopt_embed, lot_embed
from .errors import InputError
from .io import write_json
from .measures import DiscreteMeasure
from .solver_opt import solve_opt

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentRecord:
    kind: str
    method: str
    n: int
    k: int
    lam: float
    trial: int
    seed: int
    value: float

    def key(self):
        return (self.kind, self.method, self.n, self.k, self.lam, self.trial, self.seed)


def n_threads() -> int:
    try:
        return max(1, int(os.environ.get("LOPT_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items, threads: int | None = None):
    threads = n_threads() if threads is None else threads
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def pairwise_relative_errors(measures, reference: DiscreteMeasure, lam: float, threads=None):
    """Relative errors |OPT - LOPT| / OPT over all pairs (LOPT with the deficit term).

    Pairs with OPT == 0 have no relative error; they are returned as a skip count.
    """
    embs = _map(lambda m: lopt_embed(reference, m, lam), measures, threads)
    pairs = list(combinations(range(len(measures)), 2))
    exact = _map(lambda ij: solve_opt(measures[ij[0]], measures[ij[1]], lam).cost, pairs, threads)
    errors, skipped = [], 0
    for (i, j), opt in zip(pairs, exact):
        approx = lopt_discrepancy(embs[i], embs[j], reference, include_deficit=True)
        if opt <= 0.0:
            skipped += 1
            continue
        errors.append(abs(opt - approx) / opt)
    return np.array(errors), skipped


def relative_error_experiment(n: int, k: int, lambdas, trials: int, seed: int, threads=None):
    """Mean pairwise relative error per (lambda, trial) on sqrt(3)-mean Gaussians."""
    if k < 2:
        raise InputError("relative error needs k >= 2 measures")
    records, skipped = [], {}
    for trial in range(trials):
        measures, reference, _ = gaussian_corpus(n, k, seed, trial)
        for lam in lambdas:
            errs, skip = pairwise_relative_errors(measures, reference, float(lam), threads)
            skipped[f"{float(lam)}/{trial}"] = skip
            value = float(errs.mean()) if errs.size else float("nan")
            records.append(ExperimentRecord("relative_error", "lopt", n, k, float(lam), trial, seed, value))
            log.info("trial %d lambda %g: mean relative error %.4g", trial, lam, value)
    return sorted(records, key=ExperimentRecord.key), skipped


def _warm_up():
    # first call pays for JIT compilation; keep it out of timings
    a = DiscreteMeasure.uniform([[0.0, 0.0], [1.0, 0.0]])
    solve_opt(a, a, 1.0)


def timing_experiment(n: int, k: int, lam: float, seed: int, trial: int = 0):
    """Wall-clock of all pairwise OPT solves vs K embeddings plus all pairwise LOPT evaluations."""
    measures, reference, _ = gaussian_corpus(n, k, seed, trial)
    _warm_up()
    t0 = time.perf_counter()
    for i, j in combinations(range(k), 2):
        solve_opt(measures[i], measures[j], lam)
    t_opt = time.perf_counter() - t0

    t0 = time.perf_counter()
    embs = [lopt_embed(reference, m, lam) for m in measures]
    for i, j in combinations(range(k), 2):
        lopt_discrepancy(embs[i], embs[j], reference)
    t_lopt = time.perf_counter() - t0
    return [
        ExperimentRecord("timing", "lopt", n, k, float(lam), trial, seed, t_lopt),
        ExperimentRecord("timing", "opt_pairwise", n, k, float(lam), trial, seed, t_opt),
    ]


@dataclass(frozen=True)
class PcaExperiment:
    lot_accuracy: float
    lopt_accuracy: float
    lot_projections: np.ndarray
    lopt_projections: np.ndarray
    labels: np.ndarray


def pca_robustness_experiment(
    n: int = 60,
    per_class: int = 50,
    eta: float = 0.75,
    lam: float = 1.0,
    seed: int = 0,
    means=((-1.5, 0.0), (1.5, 0.0)),
    cov_scale: float = 0.5,
    bary_samples: int = 30,
    bary_iters: int = 10,
    components: int = 2,
    noise_box=None,
) -> PcaExperiment:
    """Embed a noisy two-class corpus with LOT (renormalized) and LOPT (raw mass); score PC1 thresholds."""
    clean, labels = blob_corpus(n, per_class, means, cov_scale, seed, 0)
    noisy = [add_noise(mu, eta, make_rng(seed, 1, i), noise_box) for i, mu in enumerate(clean)]

    pick = make_rng(seed, 2).choice(len(clean), size=min(bary_samples, len(clean)), replace=False)
    reference = ot_barycenter([clean[i] for i in sorted(pick)], n, bary_iters, seed)

    lot = [lot_embed(reference, mu.normalized()).u for mu in noisy]
    lopt = [lopt_embed(reference, mu, lam).u for mu in noisy]
    res_lot = pca(flatten_embeddings(lot), reference.weights, components)
    res_lopt = pca(flatten_embeddings(lopt), reference.weights, components)
    return PcaExperiment(
        lot_accuracy=threshold_accuracy(res_lot.projections[:, 0], labels),
        lopt_accuracy=threshold_accuracy(res_lopt.projections[:, 0], labels),
        lot_projections=res_lot.projections,
        lopt_projections=res_lopt.projections,
        labels=labels,
    )


def write_records(records, path, params: dict) -> None:
    """Flat CSV sorted by key, plus ``<path>.json`` holding the run parameters."""
    path = Path(path)
    names = [f.name for f in fields(ExperimentRecord)]
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=[("lambda" if c == "lam" else c) for c in names], lineterminator="\n")
        w.writeheader()
        for r in sorted(records, key=ExperimentRecord.key):
            row = asdict(r)
            row["lambda"] = row.pop("lam")
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    write_json(params, path.with_suffix(path.suffix + ".json"))
