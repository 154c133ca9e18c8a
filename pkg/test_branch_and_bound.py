"""
Branch-and-bound tests against brute-force enumeration
"""
import itertools

import numpy as np
import pytest

from app.core.exceptions import ConfigurationError
from app.milp import MilpModel, RowSense, SolveStatus
from app.solver import SolveConfig, solve, solve_mip


def knapsack(values, weights, capacity, name="knapsack") -> MilpModel:
    model = MilpModel(name)
    items = [model.add_binary(f"take[{i}]") for i in range(len(values))]
    model.add_constraint("capacity", {item: w for item, w in zip(items, weights)}, RowSense.LE, capacity)
    model.set_objective({item: -v for item, v in zip(items, values)})
    return model.seal()


def best_by_enumeration(values, weights, capacity) -> float:
    best = 0.0
    for choice in itertools.product([0, 1], repeat=len(values)):
        if np.dot(choice, weights) <= capacity:
            best = max(best, float(np.dot(choice, values)))
    return -best


def test_knapsack_matches_enumeration():
    rng = np.random.default_rng(3)
    for index in range(12):
        values = rng.integers(1, 20, size=8).astype(float)
        weights = rng.integers(1, 10, size=8).astype(float)
        capacity = float(weights.sum() // 2)
        solution = solve_mip(knapsack(values, weights, capacity, f"knapsack{index}"), SolveConfig(mip_gap=0.0))

        assert solution.status == SolveStatus.OPTIMAL
        assert solution.objective == pytest.approx(best_by_enumeration(values, weights, capacity))
        assert set(np.unique(solution.values)) <= {0.0, 1.0}
        assert solution.bound <= solution.objective + 1e-9


def test_mixed_problem_duals_come_from_fixed_binaries():
    model = MilpModel("mixed")
    b = model.add_binary("b")
    x = model.add_variable("x")
    model.add_constraint("serve", {x: 1.0, b: 4.0}, RowSense.GE, 6.0)
    model.set_objective({b: 3.0, x: 1.0})
    solution = solve(model.seal())

    assert solution.status == SolveStatus.OPTIMAL
    assert solution.objective == pytest.approx(5.0)
    assert solution.value(b) == 1.0
    assert solution.value(x) == pytest.approx(2.0)
    assert solution.dual(model.constraint("serve")) == pytest.approx(1.0)
    assert solution.max_violation <= 1e-9


def test_node_limit_stops_before_an_incumbent():
    values = [10.0, 13.0, 7.0, 8.0, 9.0]
    weights = [3.0, 5.0, 2.0, 4.0, 3.0]
    model = knapsack(values, weights, 8.5)
    solution = solve_mip(model, SolveConfig(node_limit=1))

    assert solution.status == SolveStatus.NO_INCUMBENT
    assert not solution.has_solution
    assert solution.nodes == 1


def test_infeasible_mip():
    model = MilpModel("none")
    a = model.add_binary("a")
    b = model.add_binary("b")
    model.add_constraint("both", {a: 1.0, b: 1.0}, RowSense.GE, 1.5)
    model.add_constraint("one", {a: 1.0, b: 1.0}, RowSense.LE, 1.2)
    solution = solve_mip(model.seal())
    assert solution.status == SolveStatus.INFEASIBLE


def test_unknown_backend_rejected():
    model = MilpModel("m")
    model.add_variable("x")
    with pytest.raises(ConfigurationError):
        solve(model, backend="quantum")
