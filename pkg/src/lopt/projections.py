"""Barycentric projections of a target onto the support of a reference."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .measures import MASS_TOL, DiscreteMeasure, TransportPlan, check_dominated, total_mass


@dataclass(frozen=True)
class ProjectedMeasure:
    """Projection aligned index-for-index with the reference.

    ``deficit`` is the target mass the projection drops (zero for OT).
    """

    measure: DiscreteMeasure
    deficit: float


def _row_averages(gamma: TransportPlan, mu0: DiscreteMeasure, muj: DiscreteMeasure):
    """Row sums and mass-weighted average target locations; rows without mass stay at ``mu0``."""
    row_mass = np.zeros(mu0.size)
    avg = mu0.points.copy()
    bounds = np.searchsorted(gamma.rows, np.arange(mu0.size + 1))
    for n in range(mu0.size):
        lo, hi = bounds[n], bounds[n + 1]
        if hi == lo:
            continue
        g = gamma.mass[lo:hi]
        tot = math.fsum(g)
        row_mass[n] = tot
        # ratio weights make a single-entry row reproduce its target exactly
        frac = g / tot
        tgt = muj.points[gamma.cols[lo:hi]]
        avg[n] = [math.fsum(frac * tgt[:, k]) for k in range(mu0.dim)]
    return row_mass, avg


def ot_barycentric_projection(mu0: DiscreteMeasure, muj: DiscreteMeasure, gamma: TransportPlan) -> ProjectedMeasure:
    """Replace ``muj`` by N_0 atoms at the average destination of each reference atom.

    Weights are the reference weights; the plan must be balanced.
    """
    if mu0.dim != muj.dim:
        raise InputError("dimension mismatch")
    check_dominated(gamma, mu0, muj)
    if np.any(mu0.weights <= 0):
        raise InputError("OT barycentric projection needs strictly positive reference weights")
    row_mass, avg = _row_averages(gamma, mu0, muj)
    if np.any(np.abs(row_mass - mu0.weights) > MASS_TOL) or np.any(np.abs(gamma.marginal1 - muj.weights) > MASS_TOL):
        raise InputError("plan is not a balanced coupling of the two measures")
    return ProjectedMeasure(DiscreteMeasure(avg, mu0.weights), 0.0)


def opt_barycentric_projection(mu0: DiscreteMeasure, muj: DiscreteMeasure, gamma: TransportPlan) -> ProjectedMeasure:
    """Partial-transport version: weights are the plan's row sums, empty rows sit on the reference atom."""
    if mu0.dim != muj.dim:
        raise InputError("dimension mismatch")
    check_dominated(gamma, mu0, muj)
    row_mass, avg = _row_averages(gamma, mu0, muj)
    deficit = total_mass(muj) - math.fsum(row_mass)
    return ProjectedMeasure(DiscreteMeasure(avg, row_mass), max(deficit, 0.0))
