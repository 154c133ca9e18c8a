"""
LP core tests: revised simplex against the dense tableau and scipy
"""
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from app.milp import INF, MilpModel, RowSense, SolveStatus
from app.solver import SolveConfig, solve_lp, solve_lp_arrays, solve_tableau


def random_feasible_lp(rng: np.random.Generator, index: int) -> MilpModel:
    """Bounded columns around an interior point, so the LP is feasible and bounded"""
    model = MilpModel(f"lp{index}")
    n = int(rng.integers(2, 7))
    m = int(rng.integers(1, 6))
    point = rng.uniform(0.0, 5.0, size=n)
    variables = [model.add_variable(f"x[{j}]", float(rng.choice([0.0, -3.0])), 10.0) for j in range(n)]
    for i in range(m):
        row = rng.integers(-4, 5, size=n).astype(float)
        if not row.any():
            row[0] = 1.0
        activity = float(row @ point)
        kind = int(rng.integers(0, 4))
        coefficients = {variables[j]: row[j] for j in range(n) if row[j] != 0.0}
        if kind == 0:
            model.add_constraint(f"c[{i}]", coefficients, RowSense.LE, activity + float(rng.uniform(0, 2)))
        elif kind == 1:
            model.add_constraint(f"c[{i}]", coefficients, RowSense.GE, activity - float(rng.uniform(0, 2)))
        elif kind == 2:
            model.add_constraint(f"c[{i}]", coefficients, RowSense.EQ, activity)
        else:
            model.add_constraint(f"c[{i}]", coefficients, RowSense.GE, activity - 1.0, range_=2.0)
    model.set_objective({v: float(rng.normal()) for v in variables})
    return model.seal()


def scipy_objective(model: MilpModel) -> float:
    arrays = model.to_arrays()
    A = arrays.A.toarray()
    ub_rows, ub_rhs, eq_rows, eq_rhs = [], [], [], []
    for i in range(A.shape[0]):
        lo, hi = arrays.row_lo[i], arrays.row_hi[i]
        if lo == hi:
            eq_rows.append(A[i])
            eq_rhs.append(lo)
            continue
        if math.isfinite(hi):
            ub_rows.append(A[i])
            ub_rhs.append(hi)
        if math.isfinite(lo):
            ub_rows.append(-A[i])
            ub_rhs.append(-lo)
    result = linprog(
        arrays.c,
        A_ub=np.array(ub_rows) if ub_rows else None,
        b_ub=np.array(ub_rhs) if ub_rhs else None,
        A_eq=np.array(eq_rows) if eq_rows else None,
        b_eq=np.array(eq_rhs) if eq_rhs else None,
        bounds=list(zip(arrays.col_lo, arrays.col_hi)),
        method="highs",
    )
    assert result.status == 0
    return float(result.fun) + arrays.constant


def test_revised_simplex_matches_scipy_and_tableau():
    rng = np.random.default_rng(11)
    config = SolveConfig()
    for index in range(40):
        model = random_feasible_lp(rng, index)
        arrays = model.to_arrays()
        solution = solve_lp_arrays(arrays, config)
        assert solution.status == SolveStatus.OPTIMAL, f"lp{index}"
        expected = scipy_objective(model)
        assert solution.objective == pytest.approx(expected, rel=1e-6, abs=1e-6)

        oracle = solve_tableau(arrays)
        assert oracle.status == SolveStatus.OPTIMAL
        assert oracle.objective == pytest.approx(expected, rel=1e-6, abs=1e-6)

        assert arrays.max_violation(solution.values) <= 1e-6
        assert solution.dual_objective == pytest.approx(solution.objective, rel=1e-6, abs=1e-6)


def test_duals_are_rhs_sensitivities():
    model = MilpModel("duals")
    x = model.add_variable("x")
    y = model.add_variable("y")
    model.add_constraint("demand", {x: 1.0, y: 1.0}, RowSense.GE, 4.0)
    model.add_constraint("cap", {x: 1.0}, RowSense.LE, 3.0)
    model.set_objective({x: 1.0, y: 2.0})
    solution = solve_lp(model.seal())

    assert solution.status == SolveStatus.OPTIMAL
    assert solution.objective == pytest.approx(5.0)
    np.testing.assert_allclose(solution.values, [3.0, 1.0], atol=1e-9)
    assert solution.dual(model.constraint("demand")) == pytest.approx(2.0)
    assert solution.dual(model.constraint("cap")) == pytest.approx(-1.0)


def test_infeasible_lp_reports_farkas_duals():
    model = MilpModel("infeasible")
    x = model.add_variable("x")
    y = model.add_variable("y")
    model.add_constraint("low", {x: 1.0, y: 1.0}, RowSense.LE, 1.0)
    model.add_constraint("high", {x: 1.0, y: 1.0}, RowSense.GE, 3.0)
    model.set_objective({x: 1.0})
    solution = solve_lp(model.seal())

    assert solution.status == SolveStatus.INFEASIBLE
    assert np.any(solution.duals != 0.0)
    assert solve_tableau(model.to_arrays()).status == SolveStatus.INFEASIBLE


def test_unbounded_lp_returns_improving_ray():
    model = MilpModel("unbounded")
    x = model.add_variable("x")
    y = model.add_variable("y")
    model.add_constraint("c", {x: 1.0, y: -1.0}, RowSense.LE, 1.0)
    model.set_objective({x: -1.0})
    solution = solve_lp(model.seal())

    assert solution.status == SolveStatus.UNBOUNDED
    assert solution.ray is not None
    assert float(model.to_arrays().c @ solution.ray) < 0.0
    assert solve_tableau(model.to_arrays()).status == SolveStatus.UNBOUNDED


def test_model_without_rows_moves_columns_to_cheapest_bound():
    model = MilpModel("bounds")
    x = model.add_variable("x", 1.0, 5.0)
    y = model.add_variable("y", -2.0, INF)
    model.set_objective({x: -2.0, y: 1.0}, constant=3.0)
    solution = solve_lp(model.seal())

    assert solution.status == SolveStatus.OPTIMAL
    np.testing.assert_allclose(solution.values, [5.0, -2.0])
    assert solution.objective == pytest.approx(-9.0)


def test_crossed_bound_overrides_are_infeasible():
    model = MilpModel("crossed")
    x = model.add_variable("x", 0.0, 1.0)
    model.add_constraint("c", {x: 1.0}, RowSense.LE, 1.0)
    arrays = model.seal().to_arrays()
    solution = solve_lp_arrays(arrays, SolveConfig(), col_lo=np.array([1.0]), col_hi=np.array([0.0]))
    assert solution.status == SolveStatus.INFEASIBLE


def test_free_columns_in_tableau_oracle():
    model = MilpModel("free")
    x = model.add_variable("x", -INF, INF)
    model.add_constraint("lo", {x: 1.0}, RowSense.GE, -4.0)
    model.set_objective({x: 1.0})
    arrays = model.seal().to_arrays()

    assert solve_lp_arrays(arrays, SolveConfig()).objective == pytest.approx(-4.0)
    assert solve_tableau(arrays).objective == pytest.approx(-4.0)


def test_interior_values_of_half_infinite_columns_are_kept():
    model = MilpModel("interior")
    x = model.add_variable("x")                 # [0, inf)
    y = model.add_variable("y", -INF, 5.0)      # (-inf, 5]
    z = model.add_variable("z", -INF, INF)
    model.add_constraint("floor", {x: 1.0}, RowSense.GE, 2.5)
    model.add_constraint("ceiling", {y: 1.0}, RowSense.LE, 1.5)
    model.add_constraint("level", {z: 1.0, x: 1.0}, RowSense.EQ, -1.5)
    model.set_objective({x: 1.0, y: -1.0})
    solution = solve_lp(model.seal())

    assert solution.status == SolveStatus.OPTIMAL
    np.testing.assert_allclose(solution.values, [2.5, 1.5, -4.0], atol=1e-9)
    assert np.all(np.isfinite(solution.values))
    assert solution.objective == pytest.approx(1.0)


def test_close_ignores_infinite_targets():
    config = SolveConfig(feasibility_tolerance=1e-7)
    assert config.close(1.0 + 1e-8, 1.0)
    assert not config.close(1.0 + 1e-6, 1.0)
    flags = config.close(np.array([3.0, 0.0, math.inf]), np.array([math.inf, -math.inf, math.inf]))
    assert not flags.any()
