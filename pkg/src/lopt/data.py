"""Synthetic corpora and the seeded random streams behind them.

All randomness goes through Philox (a counter-based bit generator) keyed by
``SeedSequence(seed, spawn_key=...)``, so a stream is named by its integer
path and independent of how many draws other streams made.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .measures import DiscreteMeasure

MEAN_NORM = math.sqrt(3.0)


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


def circle_means(k: int, radius: float = MEAN_NORM) -> np.ndarray:
    """``k`` means equally spaced on a circle, the first on the positive x-axis."""
    ang = 2.0 * np.pi * np.arange(k) / k
    return radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)


def gaussian_corpus(n: int, k: int, seed: int, *keys: int):
    """``k`` unit-mass n-point samples of N(m_i, I) plus a reference sampled from N(mean(m), I)."""
    if n < 1 or k < 1:
        raise InputError("n and k must be >= 1")
    means = circle_means(k)
    if k == 1:
        center = means[0]
    else:
        center = means.mean(axis=0)
        # cancellation leaves ~1e-16 residue; the exact center of a full circle is the origin
        center[np.abs(center) < 1e-12] = 0.0
    measures = []
    for i in range(k):
        rng = make_rng(seed, *keys, i)
        measures.append(DiscreteMeasure.uniform(rng.normal(size=(n, 2)) + means[i]))
    rng = make_rng(seed, *keys, k)
    reference = DiscreteMeasure.uniform(rng.normal(size=(n, 2)) + center)
    return measures, reference, means


def add_noise(mu: DiscreteMeasure, eta: float, rng: np.random.Generator, box=None) -> DiscreteMeasure:
    """Append ``ceil(eta N)`` uniform atoms of weight ``1/N`` over ``box`` (default: bounding box of ``mu``).

    The original weights are left untouched, so total mass grows by about ``eta``.
    """
    if not eta >= 0:
        raise InputError("eta must be nonnegative")
    n = mu.size
    count = math.ceil(eta * n - 1e-9)
    if count == 0:
        return mu
    if box is None:
        lo, hi = mu.points.min(axis=0), mu.points.max(axis=0)
    else:
        lo, hi = (np.asarray(b, dtype=float) for b in box)
        if lo.shape != (mu.dim,) or hi.shape != (mu.dim,) or np.any(hi < lo):
            raise InputError("noise box must be (low, high) corners in the measure's dimension")
    noise = rng.uniform(lo, hi, size=(count, mu.dim))
    return DiscreteMeasure(np.vstack([mu.points, noise]), np.concatenate([mu.weights, np.full(count, 1.0 / n)]))


def blob_corpus(n: int, per_class: int, means, cov_scale: float, seed: int, *keys: int):
    """Two-or-more-class corpus of unit-mass Gaussian point clouds; returns (measures, labels)."""
    measures, labels = [], []
    for c, m in enumerate(np.asarray(means, dtype=float)):
        for j in range(per_class):
            rng = make_rng(seed, *keys, c, j)
            pts = rng.normal(scale=math.sqrt(cov_scale), size=(n, m.size)) + m
            measures.append(DiscreteMeasure.uniform(pts))
            labels.append(c)
    return measures, np.array(labels)
