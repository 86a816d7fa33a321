import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import unit_measure, uniform_pair
from lopt.data import make_rng
from lopt.errors import InputError
from lopt.measures import DiscreteMeasure, TransportPlan, plan_cost_opt, plan_cost_ot, total_mass
from lopt.projections import opt_barycentric_projection, ot_barycentric_projection
from lopt.solver_opt import solve_opt
from lopt.solver_ot import solve_ot


def test_map_plan_projects_onto_mapped_points(rng):
    a, b = uniform_pair(rng, 5)
    perm = rng.permutation(5)
    plan = TransportPlan(np.arange(5), perm, np.full(5, 0.2), 5, 5)
    proj = ot_barycentric_projection(a, b, plan)
    np.testing.assert_array_equal(proj.measure.points, b.points[perm])
    np.testing.assert_array_equal(proj.measure.weights, a.weights)
    assert proj.deficit == 0.0


def test_split_row_averages():
    a = DiscreteMeasure([[0.0]], [1.0])
    b = DiscreteMeasure([[0.0], [2.0]], [0.5, 0.5])
    proj = ot_barycentric_projection(a, b, TransportPlan([0, 0], [0, 1], [0.5, 0.5], 1, 2))
    np.testing.assert_allclose(proj.measure.points, [[1.0]], atol=1e-15)
    assert proj.measure.weights[0] == 1.0


def test_identity_projection(rng):
    a, _ = uniform_pair(rng, 6)
    proj = ot_barycentric_projection(a, a, TransportPlan.diagonal(a.weights))
    np.testing.assert_array_equal(proj.measure.points, a.points)


def test_ot_projection_rejects_zero_weight_reference():
    a = DiscreteMeasure([[0.0], [1.0]], [1.0, 0.0])
    b = DiscreteMeasure([[0.0]], [1.0])
    with pytest.raises(InputError):
        ot_barycentric_projection(a, b, TransportPlan([0], [0], [1.0], 2, 1))


def test_ot_projection_rejects_partial_plan():
    a = DiscreteMeasure([[0.0]], [1.0])
    with pytest.raises(InputError):
        ot_barycentric_projection(a, a, TransportPlan([0], [0], [0.5], 1, 1))


def test_opt_projection_of_empty_plan(rng):
    a, b = uniform_pair(rng, 4, 3)
    proj = opt_barycentric_projection(a, b, TransportPlan.empty(4, 3))
    np.testing.assert_array_equal(proj.measure.points, a.points)
    np.testing.assert_array_equal(proj.measure.weights, np.zeros(4))
    assert proj.deficit == pytest.approx(1.0)


def test_opt_projection_of_full_map(rng):
    a, b = uniform_pair(rng, 4)
    perm = rng.permutation(4)
    proj = opt_barycentric_projection(a, b, TransportPlan(np.arange(4), perm, np.full(4, 0.25), 4, 4))
    np.testing.assert_array_equal(proj.measure.points, b.points[perm])
    assert proj.deficit == pytest.approx(0.0, abs=1e-15)


def test_opt_projection_partial_row():
    a = DiscreteMeasure([[0.0, 0.0], [5.0, 5.0]], [0.5, 0.5])
    b = DiscreteMeasure([[1.0, 1.0], [9.0, 9.0]], [0.6, 0.7])
    proj = opt_barycentric_projection(a, b, TransportPlan([0], [0], [0.4], 2, 2))
    np.testing.assert_array_equal(proj.measure.weights, [0.4, 0.0])
    np.testing.assert_array_equal(proj.measure.points, [[1.0, 1.0], [5.0, 5.0]])
    assert proj.deficit == pytest.approx(1.3 - 0.4, abs=1e-15)


def test_opt_projection_rejects_overfull_plan():
    a = DiscreteMeasure([[0.0]], [1.0])
    with pytest.raises(InputError):
        opt_barycentric_projection(a, a, TransportPlan([0], [0], [2.0], 1, 1))


@given(st.integers(0, 2**31), st.integers(1, 10), st.integers(1, 10))
def test_diagonal_plan_is_ot_optimal(seed, n0, n1):
    a, b = uniform_pair(make_rng(seed), n0, n1)
    proj = ot_barycentric_projection(a, b, solve_ot(a, b).plan).measure
    diag = plan_cost_ot(TransportPlan.diagonal(a.weights), a, proj)
    assert diag == pytest.approx(solve_ot(a, proj).cost, abs=1e-8)


@given(st.integers(0, 2**31), st.sampled_from([0.1, 0.5, 2.0]))
def test_diagonal_plan_is_opt_optimal(seed, lam):
    rng = make_rng(seed)
    a = DiscreteMeasure(rng.random((6, 2)) * 2, rng.random(6))
    b = DiscreteMeasure(rng.random((5, 2)) * 2, rng.random(5))
    proj = opt_barycentric_projection(a, b, solve_opt(a, b, lam).plan)
    diag = plan_cost_opt(TransportPlan.diagonal(proj.measure.weights), a, proj.measure, lam)
    assert diag == pytest.approx(solve_opt(a, proj.measure, lam).cost, abs=1e-8)


def test_map_plans_lose_exactly_lambda_per_deficit(rng):
    checked = 0
    for _ in range(30):
        a, b = unit_measure(rng, 6), unit_measure(rng, 8)
        lam = 0.8
        sol = solve_opt(a, b, lam)
        assert sol.plan.is_map()
        proj = opt_barycentric_projection(a, b, sol.plan)
        rhs = solve_opt(a, proj.measure, lam).cost + lam * (total_mass(b) - total_mass(proj.measure))
        assert sol.cost == pytest.approx(rhs, abs=1e-8)
        checked += 1
    assert checked == 30


def test_projection_is_idempotent(rng):
    for _ in range(10):
        a, b = uniform_pair(rng, 8, 13)
        first = ot_barycentric_projection(a, b, solve_ot(a, b).plan).measure
        second = ot_barycentric_projection(a, first, solve_ot(a, first).plan).measure
        np.testing.assert_allclose(second.points, first.points, atol=1e-9)
