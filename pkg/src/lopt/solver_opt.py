"""Exact optimal partial transport via the dummy-node reduction to balanced OT."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._simplex import solve_transport
from .errors import InputError
from .measures import DiscreteMeasure, TransportPlan, plan_cost_opt, sq_dists, total_mass
from .solver_ot import _check_pair, _enumerate_plans, integer_units, plan_from_basis


@dataclass(frozen=True)
class OptSolution:
    plan: TransportPlan
    cost: float
    transported_mass: float
    destroyed_mass: float
    created_mass: float


def _solution(plan, mu0, muj, lam) -> OptSolution:
    moved = plan.total
    return OptSolution(
        plan=plan,
        cost=plan_cost_opt(plan, mu0, muj, lam),
        transported_mass=moved,
        destroyed_mass=total_mass(mu0) - moved,
        created_mass=total_mass(muj) - moved,
    )


def _check_lambda(lam):
    if not (lam >= 0 and math.isfinite(lam)):
        raise InputError(f"lambda must be finite and nonnegative, got {lam!r}")


def augmented_cost(mu0: DiscreteMeasure, muj: DiscreteMeasure, lam: float) -> np.ndarray:
    """(N_0+1) x (N_j+1) cost matrix with a dummy row and column priced at ``lam``."""
    n0, n1 = mu0.size, muj.size
    cost = np.empty((n0 + 1, n1 + 1))
    cost[:n0, :n1] = sq_dists(mu0.points, muj.points)
    cost[:n0, n1] = lam
    cost[n0, :n1] = lam
    cost[n0, n1] = 0.0
    return cost


def solve_opt(mu0: DiscreteMeasure, muj: DiscreteMeasure, lam: float) -> OptSolution:
    """Optimal partial plan: transport at squared distance, create/destroy at ``lam`` per unit.

    The source side gets a dummy atom holding ``|muj|`` and the target side
    one holding ``|mu0|``; the real-to-real block of the balanced optimum
    is an optimal partial plan with the same value.
    """
    _check_lambda(lam)
    _check_pair(mu0, muj)
    m0, m1 = total_mass(mu0), total_mass(muj)
    n0, n1 = mu0.size, muj.size
    a = np.append(mu0.weights, m1)
    b = np.append(muj.weights, m0)
    rows, cols, flow, _ = solve_transport(a, b, augmented_cost(mu0, muj, lam))
    plan = plan_from_basis(rows, cols, flow, n0, n1, keep=(rows < n0) & (cols < n1))
    return _solution(plan, mu0, muj, lam)


def brute_force_opt(mu0: DiscreteMeasure, muj: DiscreteMeasure, lam: float) -> OptSolution:
    """Enumerate every integer-unit partial plan; needs ``(|mu0| + |muj|) / u <= 10``."""
    _check_lambda(lam)
    _check_pair(mu0, muj)
    n0, n1 = mu0.size, muj.size
    unit, counts = integer_units(np.concatenate([mu0.weights, muj.weights]))
    a, b = counts[:n0], counts[n0:]
    if sum(a) + sum(b) > 10:
        raise InputError(f"instance too large for enumeration ({sum(a) + sum(b)} units > 10)")
    u = float(unit)
    cost = sq_dists(mu0.points, muj.points)
    # per-unit saving of moving one unit instead of destroying + creating it
    gain = cost - 2.0 * lam
    best, best_g = math.inf, None
    for g in _enumerate_plans(a, b, exact=False):
        c = math.fsum(gain[i, j] * g[i][j] for i in range(n0) for j in range(n1) if g[i][j])
        if c < best - 1e-15:
            best, best_g = c, [row[:] for row in g]
    plan = TransportPlan.from_dense(np.array(best_g, dtype=float) * u)
    return _solution(plan, mu0, muj, lam)
