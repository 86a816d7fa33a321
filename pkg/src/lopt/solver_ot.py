"""Exact balanced optimal transport between discrete measures."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from ._simplex import solve_transport
from .errors import InputError
from .measures import DiscreteMeasure, TransportPlan, plan_cost_ot, sq_dists, total_mass

ZERO_MASS = 1e-12


@dataclass(frozen=True)
class OtSolution:
    plan: TransportPlan
    cost: float


def _check_pair(mu0: DiscreteMeasure, muj: DiscreteMeasure):
    if mu0.dim != muj.dim:
        raise InputError(f"dimension mismatch: {mu0.dim} vs {muj.dim}")


def _check_balanced(mu0: DiscreteMeasure, muj: DiscreteMeasure):
    m0, m1 = total_mass(mu0), total_mass(muj)
    if m0 <= 0 or m1 <= 0:
        raise InputError("both measures need positive total mass")
    if abs(m0 - m1) > 1e-9 * max(m0, m1, 1.0):
        raise InputError(f"unbalanced masses {m0!r} and {m1!r}; use solve_opt for partial transport")


def plan_from_basis(rows, cols, flow, n0, n1, keep=None) -> TransportPlan:
    mask = flow > ZERO_MASS
    if keep is not None:
        mask &= keep
    return TransportPlan(rows[mask], cols[mask], flow[mask], n0, n1)


def solve_ot(mu0: DiscreteMeasure, muj: DiscreteMeasure) -> OtSolution:
    """Optimal coupling for the squared Euclidean cost.

    The returned plan is a basic solution, so it has at most
    ``N_0 + N_j - 1`` entries.
    """
    _check_pair(mu0, muj)
    _check_balanced(mu0, muj)
    cost = sq_dists(mu0.points, muj.points)
    rows, cols, flow, _ = solve_transport(mu0.weights, muj.weights, cost)
    plan = plan_from_basis(rows, cols, flow, mu0.size, muj.size)
    return OtSolution(plan, plan_cost_ot(plan, mu0, muj))


def integer_units(weights, max_denominator: int = 10**6) -> tuple[Fraction, list[int]]:
    """Common unit ``u`` and integer counts ``k`` with ``weights == k * u`` (within 1e-12)."""
    fr = [Fraction(float(w)).limit_denominator(max_denominator) for w in weights]
    for f, w in zip(fr, weights):
        if abs(float(f) - float(w)) > 1e-12 * max(1.0, abs(float(w))):
            raise InputError("weights are not rational with a small denominator")
    pos = [f for f in fr if f > 0]
    if not pos:
        return Fraction(1), [0] * len(fr)
    den = reduce(math.lcm, (f.denominator for f in pos))
    num = reduce(math.gcd, (f.numerator * (den // f.denominator) for f in pos))
    unit = Fraction(num, den)
    return unit, [int(f / unit) for f in fr]


def _enumerate_plans(a: list[int], b: list[int], exact: bool):
    """Yield every nonnegative integer matrix with row sums/col sums equal to (or at most) a, b."""
    n, m = len(a), len(b)
    g = [[0] * m for _ in range(n)]
    rem_a = list(a)
    rem_b = list(b)

    def rec(cell):
        if cell == n * m:
            if not exact or (not any(rem_a) and not any(rem_b)):
                yield g
            return
        i, j = divmod(cell, m)
        hi = min(rem_a[i], rem_b[j])
        lo = 0
        if exact and j == m - 1:
            # the last cell in a row must absorb the row's remainder
            if rem_a[i] > rem_b[j]:
                return
            lo = hi = rem_a[i]
        for f in range(lo, hi + 1):
            g[i][j] = f
            rem_a[i] -= f
            rem_b[j] -= f
            yield from rec(cell + 1)
            rem_a[i] += f
            rem_b[j] += f
        g[i][j] = 0

    yield from rec(0)


def brute_force_ot(mu0: DiscreteMeasure, muj: DiscreteMeasure) -> OtSolution:
    """Exhaustive oracle for tiny instances.

    Uniform weights with ``N_0 == N_j <= 8`` enumerate permutations (optimal
    by Birkhoff); otherwise weights must share a unit with at most 12 units
    per side, and every integer coupling is enumerated.
    """
    _check_pair(mu0, muj)
    _check_balanced(mu0, muj)
    cost = sq_dists(mu0.points, muj.points)
    w0, w1 = mu0.weights, muj.weights
    n0, n1 = mu0.size, muj.size
    uniform = n0 == n1 and np.ptp(w0) == 0 and np.ptp(w1) == 0 and abs(w0[0] - w1[0]) <= 1e-15
    if uniform and n0 <= 8:
        best, best_perm = math.inf, None
        for perm in itertools.permutations(range(n1)):
            c = math.fsum(cost[i, perm[i]] for i in range(n0))
            if c < best:
                best, best_perm = c, perm
        plan = TransportPlan(np.arange(n0), np.array(best_perm), w0.copy(), n0, n1)
        return OtSolution(plan, plan_cost_ot(plan, mu0, muj))

    unit, counts = integer_units(np.concatenate([w0, w1]))
    a, b = counts[:n0], counts[n0:]
    if sum(a) != sum(b):
        raise InputError("integer unit counts do not balance")
    if sum(a) > 12:
        raise InputError(f"instance too large for enumeration ({sum(a)} units > 12)")
    best, best_g = math.inf, None
    for g in _enumerate_plans(a, b, exact=True):
        c = math.fsum(cost[i, j] * g[i][j] for i in range(n0) for j in range(n1) if g[i][j])
        if c < best:
            best, best_g = c, [row[:] for row in g]
    plan = TransportPlan.from_dense(np.array(best_g, dtype=float) * float(unit))
    return OtSolution(plan, plan_cost_ot(plan, mu0, muj))
