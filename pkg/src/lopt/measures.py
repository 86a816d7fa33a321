"""Discrete measures, sparse transport plans and the squared-Euclidean cost functionals."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

MASS_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Weighted point cloud ``sum_n w_n delta_{x_n}`` in R^d.

    Weights need not sum to one and zero-weight atoms are kept so that
    index alignment with a reference support survives projection.
    """

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        w = np.array(self.weights, dtype=np.float64).reshape(-1)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError(f"points must be a nonempty N x d array, got shape {pts.shape}")
        if w.shape[0] != pts.shape[0]:
            raise InputError(f"{pts.shape[0]} points but {w.shape[0]} weights")
        if not np.all(np.isfinite(pts)):
            raise InputError("coordinates must be finite")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InputError("weights must be finite and nonnegative")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "weights", _frozen(w))

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def mass(self) -> float:
        return total_mass(self)

    @classmethod
    def uniform(cls, points, mass: float = 1.0) -> "DiscreteMeasure":
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        n = pts.shape[0]
        return cls(pts, np.full(n, mass / n))

    def normalized(self, mass: float = 1.0) -> "DiscreteMeasure":
        m = total_mass(self)
        if m <= 0:
            raise InputError("cannot normalize a measure with zero mass")
        return DiscreteMeasure(self.points, self.weights * (mass / m))

    def fingerprint(self) -> str:
        """Content hash used to bind embeddings to the reference they were built on."""
        h = hashlib.sha256()
        h.update(np.asarray(self.points.shape, dtype=np.int64).tobytes())
        h.update(np.ascontiguousarray(self.points).tobytes())
        h.update(np.ascontiguousarray(self.weights).tobytes())
        return h.hexdigest()[:16]

    def __repr__(self) -> str:
        return f"DiscreteMeasure(N={self.size}, d={self.dim}, mass={self.mass:.6g})"


@dataclass(frozen=True, eq=False)
class TransportPlan:
    """Sparse coupling stored as (source, target, mass) triplets with mass > 0."""

    rows: np.ndarray
    cols: np.ndarray
    mass: np.ndarray
    n0: int
    n1: int

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.int64).reshape(-1)
        c = np.asarray(self.cols, dtype=np.int64).reshape(-1)
        m = np.asarray(self.mass, dtype=np.float64).reshape(-1)
        if not (r.shape == c.shape == m.shape):
            raise InputError("rows, cols and mass must have equal length")
        if np.any(m <= 0) or not np.all(np.isfinite(m)):
            raise InputError("plan entries must carry finite positive mass")
        if r.size and (r.min() < 0 or r.max() >= self.n0 or c.min() < 0 or c.max() >= self.n1):
            raise InputError("plan index out of range")
        order = np.lexsort((c, r))
        object.__setattr__(self, "rows", _frozen(r[order]))
        object.__setattr__(self, "cols", _frozen(c[order]))
        object.__setattr__(self, "mass", _frozen(m[order]))

    @classmethod
    def empty(cls, n0: int, n1: int) -> "TransportPlan":
        return cls(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0), n0, n1)

    @classmethod
    def from_dense(cls, g: np.ndarray, drop_below: float = 0.0) -> "TransportPlan":
        g = np.asarray(g, dtype=np.float64)
        r, c = np.nonzero(g > drop_below)
        return cls(r, c, g[r, c], g.shape[0], g.shape[1])

    @classmethod
    def diagonal(cls, weights) -> "TransportPlan":
        w = np.asarray(weights, dtype=np.float64)
        idx = np.flatnonzero(w > 0)
        return cls(idx, idx, w[idx], w.size, w.size)

    def __len__(self) -> int:
        return self.mass.size

    def to_dense(self) -> np.ndarray:
        g = np.zeros((self.n0, self.n1))
        np.add.at(g, (self.rows, self.cols), self.mass)
        return g

    @property
    def marginal0(self) -> np.ndarray:
        return np.bincount(self.rows, weights=self.mass, minlength=self.n0).astype(np.float64)

    @property
    def marginal1(self) -> np.ndarray:
        return np.bincount(self.cols, weights=self.mass, minlength=self.n1).astype(np.float64)

    @property
    def total(self) -> float:
        return math.fsum(self.mass)

    def is_map(self) -> bool:
        """True when every source atom sends its mass to at most one target."""
        return np.all(np.bincount(self.rows, minlength=self.n0) <= 1)

    def transpose(self) -> "TransportPlan":
        return TransportPlan(self.cols, self.rows, self.mass, self.n1, self.n0)

    def to_json(self) -> dict:
        return {
            "n0": int(self.n0),
            "n1": int(self.n1),
            "entries": [[int(i), int(j), float(m)] for i, j, m in zip(self.rows, self.cols, self.mass)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TransportPlan":
        entries = obj.get("entries", [])
        if entries:
            r, c, m = zip(*entries)
        else:
            r, c, m = (), (), ()
        return cls(np.array(r, np.int64), np.array(c, np.int64), np.array(m, float), int(obj["n0"]), int(obj["n1"]))


@dataclass(frozen=True)
class CostParams:
    lam: float = 0.0
    kind: str = "balanced"

    def __post_init__(self):
        if self.kind not in ("balanced", "partial"):
            raise InputError(f"unknown cost kind {self.kind!r}")
        if not self.lam >= 0:
            raise InputError("lambda must be nonnegative")


def total_mass(mu: DiscreteMeasure) -> float:
    return math.fsum(mu.weights)


def sq_dists(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean distances, computed by differences (no cancellation)."""
    diff = x[:, None, :] - y[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _check_plan_shape(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure):
    if gamma.n0 != mu0.size or gamma.n1 != muj.size:
        raise InputError(
            f"plan is {gamma.n0}x{gamma.n1} but measures have {mu0.size} and {muj.size} atoms"
        )
    if mu0.dim != muj.dim:
        raise InputError("measures live in different dimensions")


def entry_costs(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure) -> np.ndarray:
    _check_plan_shape(gamma, mu0, muj)
    diff = mu0.points[gamma.rows] - muj.points[gamma.cols]
    return np.einsum("ij,ij->i", diff, diff)


def plan_cost_ot(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure) -> float:
    return math.fsum(entry_costs(gamma, mu0, muj) * gamma.mass)


def check_dominated(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure, tol: float = MASS_TOL):
    _check_plan_shape(gamma, mu0, muj)
    if np.any(gamma.marginal0 > mu0.weights + tol) or np.any(gamma.marginal1 > muj.weights + tol):
        raise InputError("plan marginals exceed the measure weights")


def plan_cost_opt(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure, lam: float) -> float:
    """Transport cost plus ``lam`` per unit of destroyed and created mass."""
    if not lam >= 0:
        raise InputError("lambda must be nonnegative")
    check_dominated(gamma, mu0, muj)
    penalty = lam * (total_mass(mu0) + total_mass(muj) - 2.0 * gamma.total)
    return plan_cost_ot(gamma, mu0, muj) + penalty


def truncated_norm_sq(v, weights, two_lambda: float) -> float:
    """``sum_n min(|v_n|^2, two_lambda) * w_n``; pass ``np.inf`` for the plain weighted norm."""
    if not two_lambda >= 0:
        raise InputError("truncation level must be nonnegative")
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        v = v.reshape(-1, 1)
    w = np.asarray(weights, dtype=np.float64)
    sq = np.einsum("ij,ij->i", v, v)
    return math.fsum(np.minimum(sq, two_lambda) * w)


def measure_min(p, q) -> np.ndarray:
    """Minimum of two measures sharing one support, i.e. the elementwise weight minimum."""
    return np.minimum(np.asarray(p, float), np.asarray(q, float))
