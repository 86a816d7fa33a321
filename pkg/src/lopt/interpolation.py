"""OT/LOT geodesics and OPT/LOPT interpolating curves.

Every curve keeps a fixed atom layout across ``t``; fading atoms are
emitted with weight zero instead of being dropped.

* ``ot_geodesic``: N_i atoms moving from ``x^i`` to the projection of ``mu^j``.
* ``lot_geodesic``: N_0 atoms at ``x^0 + u_t``.
* ``opt_interpolate``: N_i transported atoms followed by N_i fading atoms at ``x^i``.
* ``lopt_interpolate``: three blocks of N_0 atoms (transported, destroyed, created).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embeddings import LoptEmbedding, LotEmbedding, _check_reference
from .errors import InputError
from .measures import DiscreteMeasure, measure_min
from .projections import opt_barycentric_projection, ot_barycentric_projection
from .solver_opt import _check_lambda, solve_opt
from .solver_ot import solve_ot

MODES = ("ot_geodesic", "lot_geodesic", "opt_interp", "lopt_interp")


@dataclass(frozen=True)
class InterpolationRequest:
    mode: str
    t: float
    lam: float | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown interpolation mode {self.mode!r}")
        _check_t(self.t)
        if self.mode in ("opt_interp", "lopt_interp"):
            if self.lam is None:
                raise InputError(f"{self.mode} needs lambda")
            _check_lambda(self.lam)


def _check_t(t):
    if not 0.0 <= t <= 1.0:
        raise InputError(f"t must lie in [0, 1], got {t!r}")


def _lerp(a, b, t):
    return (1.0 - t) * a + t * b


def ot_geodesic(mui: DiscreteMeasure, muj: DiscreteMeasure, t: float) -> DiscreteMeasure:
    _check_t(t)
    proj = ot_barycentric_projection(mui, muj, solve_ot(mui, muj).plan).measure
    return DiscreteMeasure(_lerp(mui.points, proj.points, t), mui.weights)


def lot_geodesic(a: LotEmbedding, b: LotEmbedding, reference: DiscreteMeasure, t: float) -> DiscreteMeasure:
    _check_t(t)
    _check_reference(a, b, reference)
    return DiscreteMeasure(reference.points + _lerp(a.u, b.u, t), reference.weights)


def opt_interpolate(mui: DiscreteMeasure, muj: DiscreteMeasure, lam: float, t: float) -> DiscreteMeasure:
    """Move the transported part linearly toward the OPT projection of ``muj``; fade the rest in place."""
    _check_lambda(lam)
    _check_t(t)
    proj = opt_barycentric_projection(mui, muj, solve_opt(mui, muj, lam).plan).measure
    return _opt_frame(mui, proj, t)


def _opt_frame(mui: DiscreteMeasure, proj: DiscreteMeasure, t: float) -> DiscreteMeasure:
    destroyed = np.clip(mui.weights - proj.weights, 0.0, None)
    points = np.vstack([_lerp(mui.points, proj.points, t), mui.points])
    return DiscreteMeasure(points, np.concatenate([proj.weights, (1.0 - t) * destroyed]))


def lopt_interpolate(a: LoptEmbedding, b: LoptEmbedding, reference: DiscreteMeasure, t: float) -> DiscreteMeasure:
    _check_t(t)
    _check_reference(a, b, reference)
    if a.lam != b.lam:
        raise InputError(f"embeddings use different lambda ({a.lam} vs {b.lam})")
    x0 = reference.points
    common = measure_min(a.p_hat, b.p_hat)
    points = np.vstack([x0 + _lerp(a.u, b.u, t), x0 + a.u, x0 + b.u])
    weights = np.concatenate([common, (1.0 - t) * (a.p_hat - common), t * (b.p_hat - common)])
    return DiscreteMeasure(points, weights)


def curve(mode: str, source: DiscreteMeasure, target: DiscreteMeasure, ts,
          reference: DiscreteMeasure | None = None, lam: float | None = None) -> list[DiscreteMeasure]:
    """Evaluate one curve at several times, solving or embedding only once."""
    from .embeddings import lopt_embed, lot_embed

    reqs = [InterpolationRequest(mode, float(t), lam) for t in ts]
    if mode == "ot_geodesic":
        proj = ot_barycentric_projection(source, target, solve_ot(source, target).plan).measure
        return [DiscreteMeasure(_lerp(source.points, proj.points, r.t), source.weights) for r in reqs]
    if mode == "opt_interp":
        proj = opt_barycentric_projection(source, target, solve_opt(source, target, lam).plan).measure
        return [_opt_frame(source, proj, r.t) for r in reqs]
    if reference is None:
        raise InputError(f"{mode} needs a reference measure")
    if mode == "lot_geodesic":
        ea, eb = lot_embed(reference, source), lot_embed(reference, target)
        return [lot_geodesic(ea, eb, reference, r.t) for r in reqs]
    ea, eb = lopt_embed(reference, source, lam), lopt_embed(reference, target, lam)
    return [lopt_interpolate(ea, eb, reference, r.t) for r in reqs]


def interpolate(request: InterpolationRequest, source: DiscreteMeasure, target: DiscreteMeasure,
                reference: DiscreteMeasure | None = None) -> DiscreteMeasure:
    return curve(request.mode, source, target, [request.t], reference, request.lam)[0]
