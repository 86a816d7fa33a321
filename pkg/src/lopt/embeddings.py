"""Linearized OT / OPT embeddings against a fixed reference and the induced discrepancies."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .measures import DiscreteMeasure, measure_min, truncated_norm_sq
from .projections import opt_barycentric_projection, ot_barycentric_projection
from .solver_opt import _check_lambda, solve_opt
from .solver_ot import solve_ot


@dataclass(frozen=True, eq=False)
class LotEmbedding:
    u: np.ndarray
    reference_id: str

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    def to_json(self) -> dict:
        return {"reference_hash": self.reference_id, "u": self.u.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LotEmbedding":
        return cls(np.array(obj["u"], dtype=float), obj["reference_hash"])


@dataclass(frozen=True, eq=False)
class LoptEmbedding:
    """Displacements ``u``, transported reference mass ``p_hat`` and the dropped target mass."""

    u: np.ndarray
    p_hat: np.ndarray
    deficit: float
    lam: float
    reference_id: str

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64)
        p = np.array(self.p_hat, dtype=np.float64)
        if u.shape[0] != p.shape[0]:
            raise InputError("u and p_hat disagree on the reference size")
        if np.any(p < 0) or self.deficit < -1e-9:
            raise InputError("p_hat and deficit must be nonnegative")
        u.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "p_hat", p)

    def to_json(self) -> dict:
        return {
            "reference_hash": self.reference_id,
            "lambda": float(self.lam),
            "u": self.u.tolist(),
            "p_hat": self.p_hat.tolist(),
            "deficit": float(self.deficit),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LoptEmbedding":
        return cls(
            np.array(obj["u"], dtype=float),
            np.array(obj["p_hat"], dtype=float),
            float(obj["deficit"]),
            float(obj["lambda"]),
            obj["reference_hash"],
        )


def lot_embed(reference: DiscreteMeasure, target: DiscreteMeasure) -> LotEmbedding:
    sol = solve_ot(reference, target)
    proj = ot_barycentric_projection(reference, target, sol.plan)
    return LotEmbedding(proj.measure.points - reference.points, reference.fingerprint())


def lopt_embed(reference: DiscreteMeasure, target: DiscreteMeasure, lam: float) -> LoptEmbedding:
    _check_lambda(lam)
    sol = solve_opt(reference, target, lam)
    proj = opt_barycentric_projection(reference, target, sol.plan)
    u = proj.measure.points - reference.points
    # untransported rows sit exactly on the reference atom
    u[proj.measure.weights == 0] = 0.0
    return LoptEmbedding(u, proj.measure.weights, proj.deficit, float(lam), reference.fingerprint())


def _check_reference(a, b, reference: DiscreteMeasure):
    ref = reference.fingerprint()
    if a.reference_id != b.reference_id or a.reference_id != ref:
        raise InputError("embeddings were built against different references")
    if a.u.shape != b.u.shape or a.u.shape[0] != reference.size:
        raise InputError("embedding shape does not match the reference")


def lot_discrepancy(a: LotEmbedding, b: LotEmbedding, reference: DiscreteMeasure) -> float:
    _check_reference(a, b, reference)
    return truncated_norm_sq(a.u - b.u, reference.weights, math.inf)


def lopt_discrepancy(a: LoptEmbedding, b: LoptEmbedding, reference: DiscreteMeasure, include_deficit: bool = False) -> float:
    """Truncated displacement cost on the shared transported mass plus ``lam`` times the mass mismatch.

    With ``include_deficit`` the mass each target lost to projection is
    charged as well, which approximates the partial transport cost between
    the two original measures.
    """
    _check_reference(a, b, reference)
    if a.lam != b.lam:
        raise InputError(f"embeddings use different lambda ({a.lam} vs {b.lam})")
    lam = a.lam
    common = measure_min(a.p_hat, b.p_hat)
    value = truncated_norm_sq(a.u - b.u, common, 2.0 * lam)
    value += lam * math.fsum(np.abs(a.p_hat - b.p_hat))
    if include_deficit:
        value += lam * (a.deficit + b.deficit)
    return value


def reference_lopt_embedding(reference: DiscreteMeasure, lam: float) -> LoptEmbedding:
    """Embedding of the reference itself: no displacement, full mass, no deficit."""
    return LoptEmbedding(np.zeros_like(reference.points), reference.weights, 0.0, float(lam), reference.fingerprint())


def reference_lot_embedding(reference: DiscreteMeasure) -> LotEmbedding:
    return LotEmbedding(np.zeros_like(reference.points), reference.fingerprint())


def pairwise_discrepancies(embeddings, reference: DiscreteMeasure, include_deficit: bool = False) -> np.ndarray:
    """Symmetric K x K matrix of LOT or LOPT discrepancies."""
    k = len(embeddings)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            if isinstance(embeddings[i], LoptEmbedding):
                v = lopt_discrepancy(embeddings[i], embeddings[j], reference, include_deficit)
            else:
                v = lot_discrepancy(embeddings[i], embeddings[j], reference)
            out[i, j] = out[j, i] = v
    return out
