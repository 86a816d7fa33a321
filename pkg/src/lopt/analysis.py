"""Reference selection by free-support barycenter, and PCA over embedding vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import make_rng
from .errors import InputError
from .measures import DiscreteMeasure, total_mass
from .projections import ot_barycentric_projection
from .solver_ot import solve_ot


def ot_barycenter(measures, support_size: int, iters: int, seed: int, log: bool = False):
    """Free-support barycenter with uniform weights.

    Starts from a seeded subsample of the pooled atoms and alternates exact
    OT to every input with moving each support point to the mean of its
    projected locations.  The sum of OT costs never increases.  The result
    has unit mass; with ``log=True`` a dict with the per-iteration
    objective (``"objective"``) is returned as well.
    """
    measures = list(measures)
    if not measures:
        raise InputError("need at least one measure")
    if support_size < 1 or iters < 1:
        raise InputError("support_size and iters must be >= 1")
    masses = np.array([total_mass(m) for m in measures])
    if np.any(masses <= 0) or np.ptp(masses) > 1e-9 * max(masses.max(), 1.0):
        raise InputError("barycenter inputs must share one positive total mass")
    mass = float(masses[0])

    pool = np.vstack([m.points for m in measures])
    rng = make_rng(seed)
    idx = rng.choice(pool.shape[0], size=support_size, replace=support_size > pool.shape[0])
    support = pool[np.sort(idx)].copy()
    weights = np.full(support_size, mass / support_size)

    objective = []
    for it in range(iters + 1):
        bary = DiscreteMeasure(support, weights)
        projected = []
        obj = 0.0
        for mu in measures:
            sol = solve_ot(bary, mu)
            obj += sol.cost
            projected.append(ot_barycentric_projection(bary, mu, sol.plan).measure.points)
        objective.append(obj)
        if it == iters:
            break
        new_support = np.mean(projected, axis=0)
        if np.array_equal(new_support, support):
            break
        support = new_support

    result = DiscreteMeasure(support, np.full(support_size, 1.0 / support_size))
    if log:
        return result, {"objective": objective}
    return result


@dataclass(frozen=True, eq=False)
class PcaResult:
    components: np.ndarray
    projections: np.ndarray
    explained_variance: np.ndarray
    mean: np.ndarray


def flatten_embeddings(us) -> np.ndarray:
    """Stack K displacement fields (N_0 x d each) into a K x (N_0 d) matrix, atom-major."""
    return np.stack([np.asarray(u, dtype=float).reshape(-1) for u in us])


def scale_vectors(vectors, weights) -> np.ndarray:
    """Multiply each atom's block by ``sqrt(w_n)`` so dot products realize the weighted norm."""
    x = np.asarray(vectors, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] % w.size:
        raise InputError(f"vectors of width {x.shape[-1]} do not split into {w.size} atoms")
    d = x.shape[1] // w.size
    return x * np.repeat(np.sqrt(w), d)[None, :]


def pca(vectors, weights, components: int) -> PcaResult:
    x = scale_vectors(vectors, weights)
    k, dim = x.shape
    if not 1 <= components <= min(k, dim):
        raise InputError(f"components must be in [1, {min(k, dim)}], got {components}")
    mean = x.mean(axis=0)
    xc = x - mean
    cov = xc.T @ xc / max(k - 1, 1)
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals, kind="stable")[::-1][:components]
    comps = evecs[:, order].T
    # make the largest-magnitude entry of every component positive
    pivot = np.argmax(np.abs(comps), axis=1)
    signs = np.sign(comps[np.arange(components), pivot])
    signs[signs == 0] = 1.0
    comps = comps * signs[:, None]
    return PcaResult(
        components=comps,
        projections=xc @ comps.T,
        explained_variance=np.clip(evals[order], 0.0, None),
        mean=mean,
    )


def threshold_accuracy(scores, labels) -> float:
    """Best accuracy of a single threshold on 1-D scores separating two labels."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    classes = np.unique(labels)
    if classes.size != 2:
        raise InputError("threshold classification needs exactly two classes")
    pos = labels == classes[1]
    order = np.argsort(scores, kind="stable")
    s, y = scores[order], pos[order]
    n = y.size
    # predictions "above cut -> positive" for every cut between distinct scores
    best = max(y.sum(), n - y.sum()) / n
    below_pos = np.cumsum(y)
    for c in range(1, n):
        if s[c] == s[c - 1]:
            continue
        correct = (c - below_pos[c - 1]) + (y.sum() - below_pos[c - 1])
        best = max(best, correct / n, (n - correct) / n)
    return float(best)
