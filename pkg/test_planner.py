"""
Rolling-horizon planner tests
"""
import itertools

import numpy as np
import pytest

from app.core.exceptions import ConfigurationError, PlanningError
from app.formulation import build_yearly_model
from app.formulation.context import FormulationContext
from app.models import (
    Bus,
    CapacityConstraint,
    DecisionKind,
    DemandSpec,
    PowerSystem,
    Project,
    ProjectCatalog,
    StudyHorizon,
    ThermalPlant,
    YearData,
)
from app.repositories.plan_repository import PlanRepository
from app.services.planner import RollingHorizonPlanner, annualize_cost, run_rolling_horizon, solve_operation
from app.solver import solve
from conftest import make_instance

YEAR_HOURS = 365 * 24


def growth_instance(years: int = 2, multiplier: float = 2.0, rate: float = 0.0, **catalog_extra):
    """Load 50 MW growing to 100 MW; two 60 MW candidates, A cheaper to run than B"""
    system = PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(id="A", bus_id="n1", g_max=60.0, op_cost=10.0),
                  ThermalPlant(id="B", bus_id="n1", g_max=60.0, op_cost=12.0)],
        demands=[DemandSpec(bus_id="n1", inelastic=50.0, deficit_cost=1000.0)],
    )
    projects = catalog_extra.pop("projects", [
        Project(id="build_A", target_id="A", investment_cost=1000.0),
        Project(id="build_B", target_id="B", investment_cost=1000.0),
    ])
    catalog = ProjectCatalog(projects=projects, **catalog_extra)
    year_data = {2: YearData(demand_multiplier=multiplier)} if years >= 2 else {}
    horizon = StudyHorizon(years=years, annual_discount_rate=rate, year_data=year_data)
    return make_instance(system, catalog=catalog, horizon=horizon, name="growth")


def test_annuity_values():
    assert annualize_cost(100.0, 10, 0.0) == pytest.approx(10.0)
    assert annualize_cost(100.0, 1, 0.0) == pytest.approx(100.0)
    assert annualize_cost(100.0, 2, 0.1) == pytest.approx(12.1 / 0.21)
    with pytest.raises(ConfigurationError):
        annualize_cost(100.0, 0, 0.1)
    with pytest.raises(ConfigurationError):
        annualize_cost(100.0, 5, -0.1)


def test_investment_coefficient_uses_lifetime_when_given():
    projects = [Project(id="build_A", target_id="A", investment_cost=100.0, lifetime_years=2),
                Project(id="build_B", target_id="B", investment_cost=100.0)]
    instance = growth_instance(rate=0.1, projects=projects)
    ctx = FormulationContext(instance=instance)
    assert ctx.investment_coefficient(instance.catalog.project("build_A")) == pytest.approx(12.1 / 0.21)
    assert ctx.investment_coefficient(instance.catalog.project("build_B")) == 100.0


def test_single_year_matches_a_direct_solve():
    instance = growth_instance(years=1)
    plan = run_rolling_horizon(instance)
    direct = solve(build_yearly_model(instance, year=1).model)

    assert len(plan.years) == 1
    assert plan.years[0].objective == pytest.approx(direct.objective)
    assert plan.years[0].objective == pytest.approx(1000.0 + YEAR_HOURS * 50.0 * 10.0)
    assert plan.decision("build_A").decision_year == 1
    assert plan.decision("build_B").decision_year is None


def test_growth_triggers_a_second_build_and_decisions_stay_fixed():
    planner = RollingHorizonPlanner(growth_instance())
    plan = planner.run()

    assert plan.built_by(1) == {"build_A": 1.0}
    assert plan.built_by(2) == {"build_A": 1.0, "build_B": 1.0}
    assert [summary.new_projects for summary in plan.years] == [["build_A"], ["build_B"]]
    second = planner.results[1].yearly.model.variable("x[build_A]")
    assert (second.lower, second.upper) == (1.0, 1.0)
    # year 2 runs A flat out and B on the remaining 40 MW
    assert plan.years[1].costs.generation == pytest.approx(YEAR_HOURS * (60.0 * 10.0 + 40.0 * 12.0))
    assert plan.years[1].costs.investment == pytest.approx(2000.0)


def test_obligatory_project_enters_in_its_window():
    projects = [Project(id="build_A", target_id="A", investment_cost=1000.0),
                Project(id="build_B", target_id="B", investment_cost=1000.0,
                        decision_kind=DecisionKind.OBLIGATORY, earliest_year=2)]
    plan = run_rolling_horizon(growth_instance(multiplier=1.0, projects=projects))
    assert plan.decision("build_B").decision_year == 2
    assert plan.decision("build_A").decision_year == 1


def test_discount_factor_applies_to_present_value():
    plan = run_rolling_horizon(growth_instance(rate=0.1))
    second = plan.years[1]
    assert second.discount_factor == pytest.approx(1.0 / 1.1)
    assert second.present_value == pytest.approx(second.costs.total / 1.1)
    assert plan.total_present_value == pytest.approx(sum(s.present_value for s in plan.years))


def test_runs_are_repeatable_and_persisted(tmp_path):
    first = run_rolling_horizon(growth_instance())
    second = run_rolling_horizon(growth_instance())
    assert first.model_dump() == second.model_dump()

    repository = PlanRepository(tmp_path)
    paths = repository.save_all(first, [])
    assert PlanRepository.load_plan(paths["plan"]) == first
    costs = paths["costs"].read_text(encoding="utf-8").splitlines()
    assert costs[0].startswith("year,investment,generation")
    assert len(costs) == 3


def test_infeasible_year_raises_planning_error():
    constraint = CapacityConstraint(id="impossible", project_ids=["build_A", "build_B"], lower=500.0)
    with pytest.raises(PlanningError) as error:
        run_rolling_horizon(growth_instance(capacity_constraints=[constraint]))
    assert error.value.year == 1
    assert error.value.status == "infeasible"


def test_operation_only_run_pins_every_candidate():
    result = solve_operation(growth_instance(years=1), {"build_B": 1.0})
    x_a = result.yearly.model.variable("x[build_A]")
    assert (x_a.lower, x_a.upper) == (0.0, 0.0)
    assert result.summary.costs.generation == pytest.approx(YEAR_HOURS * 50.0 * 12.0)
    assert result.summary.deficit_energy == pytest.approx(0.0, abs=1e-6)


def random_instance(rng: np.random.Generator, candidates: int, years: int = 1):
    """An existing plant plus ``candidates`` thermal builds facing a random daily load shape"""
    thermals = [ThermalPlant(id="E", bus_id="n1", g_max=float(rng.uniform(20.0, 40.0)),
                             op_cost=float(rng.uniform(40.0, 60.0)))]
    projects = []
    for k in range(candidates):
        thermals.append(ThermalPlant(id=f"C{k}", bus_id="n1", g_max=float(rng.uniform(10.0, 50.0)),
                                     op_cost=float(rng.uniform(5.0, 35.0))))
        projects.append(Project(id=f"build_C{k}", target_id=f"C{k}",
                                investment_cost=float(rng.uniform(1e5, 8e6))))
    load = [float(value) for value in rng.uniform(30.0, 80.0, size=24)]
    system = PowerSystem(buses=[Bus(id="n1")], thermals=thermals,
                         demands=[DemandSpec(bus_id="n1", inelastic=load, deficit_cost=500.0)])
    year_data = {2: YearData(demand_multiplier=float(rng.uniform(1.0, 1.5)))} if years >= 2 else {}
    return make_instance(system, catalog=ProjectCatalog(projects=projects),
                         horizon=StudyHorizon(years=years, year_data=year_data), name="random")


def operation_cost(instance, built, year=1) -> float:
    return solve_operation(instance, {project_id: 1.0 for project_id in built}, year=year).solution.objective


def test_single_year_matches_portfolio_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(25):
        candidates = int(rng.integers(1, 4))
        instance = random_instance(rng, candidates)
        ids = [f"build_C{k}" for k in range(candidates)]
        portfolios = [set(combo) for size in range(candidates + 1) for combo in itertools.combinations(ids, size)]
        best = min(operation_cost(instance, portfolio) for portfolio in portfolios)

        planner = RollingHorizonPlanner(instance)
        plan = planner.run()
        assert plan.years[0].objective == pytest.approx(best, rel=2e-6)

        # unbuilt candidates produce nothing
        result = planner.results[0]
        for project_id in ids:
            if project_id not in plan.built_by(1):
                generation = [result.solution.values[column]
                              for key, column in result.yearly.index.g_thermal.items()
                              if key[0] == project_id.removeprefix("build_")]
                assert max(generation) <= 1e-6


def test_two_year_plan_is_bounded_by_schedule_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(10):
        candidates = int(rng.integers(1, 3))
        instance = random_instance(rng, candidates, years=2)
        ids = [f"build_C{k}" for k in range(candidates)]
        plan = run_rolling_horizon(instance)
        first = {project_id for project_id in plan.built_by(1) if project_id in ids}

        schedules = []
        for entry in itertools.product((0, 1, 2), repeat=candidates):
            year_one = {project_id for project_id, y in zip(ids, entry) if y == 1}
            year_two = {project_id for project_id, y in zip(ids, entry) if y >= 1}
            schedules.append((year_one, year_two))
        costs = {}
        for year_one, year_two in schedules:
            key = (frozenset(year_one), frozenset(year_two))
            costs[key] = operation_cost(instance, year_one, 1) + operation_cost(instance, year_two, 2)

        total = sum(summary.objective for summary in plan.years)
        assert total >= min(costs.values()) * (1.0 - 2e-6)

        best_first = min(operation_cost(instance, year_one, 1) for year_one, _ in schedules)
        assert plan.years[0].objective == pytest.approx(best_first, rel=2e-6)
        best_second = min(operation_cost(instance, year_two, 2) for _, year_two in schedules if first <= year_two)
        assert plan.years[1].objective == pytest.approx(best_second, rel=2e-6)
