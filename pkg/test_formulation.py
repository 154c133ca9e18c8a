"""
Yearly model formulation tests on toy systems
"""
import itertools
from dataclasses import replace

import numpy as np
import pytest

from app.formulation import (
    FormulationOptions,
    build_yearly_model,
    expected_variable_count,
    hourly_name,
    seasonal_name,
)
from app.formulation.investment import emit_investment_logic
from app.milp import RowSense, SolveStatus
from app.models import (
    Area,
    Battery,
    Bus,
    CapacityConstraint,
    DecisionKind,
    DemandSpec,
    ElasticSegment,
    Exclusivity,
    GenerationGroupConstraint,
    HydroPlant,
    LineKind,
    PowerSystem,
    Precedence,
    Project,
    ProjectCatalog,
    RenewablePlant,
    ReserveRequirement,
    Scenario,
    ScenarioSet,
    ThermalPlant,
    TransmissionLine,
)
from app.services.reporting import curtailment_energy, dispatch_frame, reserve_violation_energy
from app.solver import SolveConfig, solve, solve_lp_arrays
from conftest import make_instance, single_scenario, thermal_system, two_season_structure

HOURS = range(1, 25)
YEAR_HOURS = 365 * 24


def assert_balances_hold(yearly, solution, tolerance=1e-6):
    """Nodal, water and battery balances close row by row; storage cycles return to their start"""
    values = solution.values
    for constraint in yearly.model.constraints:
        if constraint.name.split("[")[0] in ("load_balance", "water_balance", "battery_balance"):
            activity = sum(coefficient * values[column] for column, coefficient in constraint.coefficients.items())
            assert activity == pytest.approx(constraint.rhs, abs=tolerance), constraint.name

    ctx, index = yearly.context, yearly.index
    seasons = range(1, ctx.structure.num_seasons + 1)
    for s in ctx.scenario_ids:
        for plant in ctx.system.hydros:
            # over a full cycle, what enters the reservoir leaves it
            net = 0.0
            for t in seasons:
                net += ctx.scenarios.inflow(plant.id, t, s)
                net -= values[index.u_hydro[(plant.id, t, s)]] + values[index.spill[(plant.id, t, s)]]
                for upstream in plant.upstream_ids:
                    net += values[index.u_hydro[(upstream, t, s)]] + values[index.spill[(upstream, t, s)]]
            assert net == pytest.approx(0.0, abs=tolerance), plant.id
        for battery in ctx.system.batteries:
            for t in seasons:
                for d in range(1, len(ctx.structure.season(t).typical_days) + 1):
                    net = sum(battery.eta_charge * values[index.q_charge[(battery.id, t, d, h, s)]]
                              - values[index.q_discharge[(battery.id, t, d, h, s)]] for h in HOURS)
                    assert net == pytest.approx(0.0, abs=tolerance), battery.id


def solve_yearly(instance, **kwargs):
    yearly = build_yearly_model(instance, **kwargs)
    solution = solve(yearly.model)
    assert solution.status == SolveStatus.OPTIMAL
    assert_balances_hold(yearly, solution)
    return yearly, solution


def fixed_integer_bounds(arrays, values):
    col_lo, col_hi = arrays.col_lo.copy(), arrays.col_hi.copy()
    col_lo[arrays.integer] = col_hi[arrays.integer] = np.round(values[arrays.integer])
    return col_lo, col_hi


def hourly_values(yearly, solution, family, entity, t=1, d=1, s="s1"):
    columns = getattr(yearly.index, family)
    return np.array([solution.values[columns[(entity, t, d, h, s)]] for h in HOURS])


def line(line_id, start, end, capacity=1000.0, **extra):
    return TransmissionLine(id=line_id, from_bus=start, to_bus=end, f_max_fwd=capacity, f_max_bwd=capacity,
                            susceptance=extra.pop("susceptance", 100.0), **extra)


def rich_system() -> PowerSystem:
    return PowerSystem(
        buses=[Bus(id="n1"), Bus(id="n2"), Bus(id="n3", area_id="A")],
        areas=[Area(id="A", import_max=50.0)],
        thermals=[
            ThermalPlant(id="G1", bus_id="n1", g_min=10.0, g_max=100.0, ramp_up=50.0, ramp_down=50.0,
                         op_cost=20.0, has_commitment=True),
            ThermalPlant(id="G2", bus_id="n2", g_max=80.0, op_cost=40.0),
        ],
        hydros=[
            HydroPlant(id="H1", bus_id="n2", v_max=100.0, u_max=50.0, rho=1.0, g_max=30.0),
            HydroPlant(id="H2", bus_id="n2", v_max=80.0, u_max=40.0, q_max=60.0, rho=0.8, g_max=20.0,
                       upstream_ids=["H1"], initial_storage_mode="fixed", initial_storage=40.0),
        ],
        renewables=[RenewablePlant(id="W", bus_id="n3", capacity=60.0, profile_unit="pu")],
        batteries=[Battery(id="B", bus_id="n3", v_max=40.0, charge_max=10.0, discharge_max=10.0)],
        lines=[line("L12", "n1", "n2"), line("L23", "n2", "n3"),
               line("L13", "n1", "n3", kind=LineKind.DC_LINK, susceptance=None)],
        demands=[
            DemandSpec(bus_id="n1", inelastic=40.0, deficit_cost=1000.0,
                       elastic_segments=[ElasticSegment(price=30.0, max_quantity=5.0)]),
            DemandSpec(bus_id="n3", inelastic=30.0, deficit_cost=1000.0),
        ],
        generation_groups=[GenerationGroupConstraint(id="grp", thermal_ids=["G1"], hydro_ids=["H1"],
                                                     bound_kind="min", threshold=10.0, violation_penalty=50.0)],
        reserve_requirements=[ReserveRequirement(id="R", thermal_ids=["G1"], hydro_ids=["H2"], battery_ids=["B"],
                                                 violation_penalty=200.0)],
    )


def rich_instance(scenario_count: int = 1, structure=None):
    scenarios = [Scenario(id=f"s{k}", probability=1.0 / scenario_count) for k in range(1, scenario_count + 1)]
    scenario_set = ScenarioSet(scenarios=scenarios, inflows={"H1": 20.0, "H2": 5.0},
                               renewable_profiles={"W": 0.5}, reserve_requirements={"R": 8.0})
    catalog = ProjectCatalog(
        projects=[Project(id="build_G2", target_id="G2", investment_cost=1000.0),
                  Project(id="build_L13", target_id="L13", investment_cost=500.0)],
        precedences=[Precedence(before="build_G2", after="build_L13")],
    )
    return make_instance(rich_system(), catalog=catalog, scenarios=scenario_set, structure=structure)


# ---------------------------------------------------------------------------- structure


def test_variable_count_matches_closed_form():
    for structure in (None, two_season_structure()):
        yearly = build_yearly_model(rich_instance(structure=structure))
        assert yearly.model.num_variables == expected_variable_count(yearly.context)
        assert yearly.index.size == yearly.model.num_variables


def test_counts_scale_with_scenarios():
    one = build_yearly_model(rich_instance(1))
    two = build_yearly_model(rich_instance(2))
    projects = len(one.context.catalog.projects)
    logic_rows = len(emit_investment_logic(one.context, one.index))

    assert two.model.num_variables - projects == 2 * (one.model.num_variables - projects)
    assert two.model.num_constraints - logic_rows == 2 * (one.model.num_constraints - logic_rows)


def test_parallel_emission_builds_the_same_model():
    serial = build_yearly_model(rich_instance(3), options=FormulationOptions(workers=1))
    parallel = build_yearly_model(rich_instance(3), options=FormulationOptions(workers=3))
    assert parallel.model.same_structure(serial.model, compare_names=True)


def test_existing_assets_get_fixed_decisions():
    yearly = build_yearly_model(rich_instance())
    model = yearly.model
    existing = model.variable("x[G1]")
    assert (existing.lower, existing.upper, existing.is_binary) == (1.0, 1.0, False)
    candidate = model.variable("x[build_G2]")
    assert (candidate.lower, candidate.upper, candidate.is_binary) == (0.0, 1.0, True)


def test_decision_bounds_follow_windows_and_pins():
    catalog = ProjectCatalog(projects=[
        Project(id="must", target_id="G", decision_kind=DecisionKind.OBLIGATORY, earliest_year=2),
    ])
    instance = make_instance(thermal_system(), catalog=catalog)
    year_one = build_yearly_model(instance, year=1).model.variable("x[must]")
    year_two = build_yearly_model(instance, year=2).model.variable("x[must]")
    pinned = build_yearly_model(instance, {"must": 0.0}, year=2).model.variable("x[must]")
    assert (year_one.lower, year_one.upper) == (0.0, 0.0)
    assert (year_two.lower, year_two.upper) == (1.0, 1.0)
    assert (pinned.lower, pinned.upper) == (0.0, 0.0)

    continuous = make_instance(thermal_system(), catalog=ProjectCatalog(projects=[
        Project(id="half", target_id="G", decision_kind=DecisionKind.CONTINUOUS)]))
    assert not build_yearly_model(continuous).model.variable("x[half]").is_binary


def test_commitment_rows_wrap_around_the_day():
    yearly = build_yearly_model(make_instance(thermal_system(has_commitment=True, g_min=20.0, ramp_up=30.0)))
    model = yearly.model
    gamma_last = model.variable(hourly_name("gamma", "G", 1, 1, 24, "s1")).index
    g_last = model.variable(hourly_name("g_thermal", "G", 1, 1, 24, "s1")).index

    startup = model.constraint(hourly_name("startup", "G", 1, 1, 1, "s1"))
    assert startup.sense == RowSense.GE and startup.coefficients[gamma_last] == 1.0
    ramp = model.constraint(hourly_name("ramp_up", "G", 1, 1, 1, "s1"))
    assert ramp.coefficients[g_last] == -1.0 and ramp.rhs == 30.0
    assert not model.has_constraint(hourly_name("ramp_down", "G", 1, 1, 1, "s1"))


def test_kvl_big_m_uses_susceptance_and_angle_limit():
    system = PowerSystem(buses=[Bus(id="n1"), Bus(id="n2")], lines=[line("L", "n1", "n2", susceptance=4.0)])
    catalog = ProjectCatalog(projects=[Project(id="build_L", target_id="L")])
    yearly = build_yearly_model(make_instance(system, catalog=catalog), options=FormulationOptions(theta_max=0.5))
    row = yearly.model.constraint(hourly_name("kvl_upper", "L", 1, 1, 1, "s1"))
    x = yearly.model.variable("x[build_L]").index
    assert row.coefficients[x] == pytest.approx(4.0)
    assert row.rhs == pytest.approx(4.0)
    reference = yearly.model.variable(hourly_name("theta", "n1", 1, 1, 1, "s1"))
    other = yearly.model.variable(hourly_name("theta", "n2", 1, 1, 1, "s1"))
    assert (reference.lower, reference.upper) == (0.0, 0.0)
    assert (other.lower, other.upper) == (-0.5, 0.5)


def test_investment_logic_accepts_exactly_the_allowed_portfolios():
    system = PowerSystem(buses=[Bus(id="n1")], thermals=[
        ThermalPlant(id=name, bus_id="n1", g_max=capacity)
        for name, capacity in (("A", 10.0), ("B", 20.0), ("C", 30.0), ("D", 40.0))
    ])
    catalog = ProjectCatalog(
        projects=[Project(id=f"p{name}", target_id=name) for name in "ABCD"],
        precedences=[Precedence(before="pA", after="pB")],
        exclusivities=[Exclusivity(id="cd", project_ids=["pC", "pD"])],
        capacity_constraints=[
            CapacityConstraint(id="band", project_ids=["pA", "pB", "pC", "pD"], lower=30.0, upper=60.0),
            CapacityConstraint(id="later", project_ids=["pA"], upper=0.0, years=[2]),
        ],
    )
    yearly = build_yearly_model(make_instance(system, catalog=catalog), year=1)
    model = yearly.model
    arrays = model.to_arrays()
    assert not model.has_constraint("capacity[later]")

    for choice in itertools.product([0.0, 1.0], repeat=4):
        a, b, c, d = choice
        allowed = b <= a and c + d <= 1 and 30 <= 10 * a + 20 * b + 30 * c + 40 * d <= 60
        point = np.zeros(model.num_variables)
        for name, value in zip("ABCD", choice):
            point[yearly.index.x[f"p{name}"]] = value
        assert (arrays.max_violation(point) == 0.0) == allowed, choice

    assert build_yearly_model(make_instance(system, catalog=catalog), year=2).model.has_constraint("capacity[later]")


# ---------------------------------------------------------------------------- dispatch


def test_thermal_serves_load_before_deficit():
    yearly, solution = solve_yearly(make_instance(thermal_system(load=50.0)))
    np.testing.assert_allclose(hourly_values(yearly, solution, "g_thermal", "G"), 50.0, atol=1e-7)
    np.testing.assert_allclose(hourly_values(yearly, solution, "deficit", "n1"), 0.0, atol=1e-7)
    assert solution.objective == pytest.approx(YEAR_HOURS * 50.0 * 10.0)


def test_island_bus_runs_a_deficit():
    system = thermal_system(load=50.0)
    system = system.model_copy(update={
        "buses": system.buses + [Bus(id="n2")],
        "demands": system.demands + [DemandSpec(bus_id="n2", inelastic=5.0, deficit_cost=1000.0)],
    })
    yearly, solution = solve_yearly(make_instance(system))
    np.testing.assert_allclose(hourly_values(yearly, solution, "deficit", "n2"), 5.0, atol=1e-7)
    assert solution.objective == pytest.approx(YEAR_HOURS * (50.0 * 10.0 + 5.0 * 1000.0))
    assert yearly.cost_breakdown(solution.values).deficit == pytest.approx(YEAR_HOURS * 5.0 * 1000.0)


def test_surplus_renewable_is_curtailed():
    system = thermal_system(load=50.0).model_copy(update={
        "renewables": [RenewablePlant(id="W", bus_id="n1", capacity=100.0)],
    })
    yearly, solution = solve_yearly(make_instance(system, scenarios=single_scenario(renewable_profiles={"W": 80.0})))
    np.testing.assert_allclose(hourly_values(yearly, solution, "g_renewable", "W"), 50.0, atol=1e-7)
    np.testing.assert_allclose(hourly_values(yearly, solution, "g_thermal", "G"), 0.0, atol=1e-7)
    assert curtailment_energy(yearly, solution.values) == pytest.approx(YEAR_HOURS * 30.0)


def test_battery_cycle_closes_within_the_day():
    load = [40.0] * 12 + [80.0] * 12
    system = PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(id="base", bus_id="n1", g_max=60.0, op_cost=10.0),
                  ThermalPlant(id="peak", bus_id="n1", g_max=100.0, op_cost=50.0)],
        batteries=[Battery(id="B", bus_id="n1", v_max=100.0, charge_max=20.0, discharge_max=20.0, eta_charge=0.9)],
        demands=[DemandSpec(bus_id="n1", inelastic=load, deficit_cost=1000.0)],
    )
    yearly, solution = solve_yearly(make_instance(system))
    charge = hourly_values(yearly, solution, "q_charge", "B")
    discharge = hourly_values(yearly, solution, "q_discharge", "B")
    storage = hourly_values(yearly, solution, "v_battery", "B")

    assert discharge.sum() == pytest.approx(0.9 * charge.sum(), abs=1e-6)
    assert discharge.sum() > 1.0
    assert storage.max() <= 100.0 + 1e-7
    for h in HOURS:
        following = storage[h % 24]
        assert following == pytest.approx(storage[h - 1] + 0.9 * charge[h - 1] - discharge[h - 1], abs=1e-6)


def test_hydro_water_balance_and_production():
    system = thermal_system(load=50.0).model_copy(update={
        "hydros": [HydroPlant(id="H", bus_id="n1", v_max=50.0, u_max=1000.0, rho=1.0, g_max=100.0)],
    })
    instance = make_instance(system, structure=two_season_structure(), scenarios=single_scenario(inflows={"H": 10.0}))
    yearly, solution = solve_yearly(instance)
    index, values = yearly.index, solution.values

    released = sum(values[index.u_hydro[("H", t, "s1")]] + values[index.spill[("H", t, "s1")]] for t in (1, 2))
    assert released == pytest.approx(20.0, abs=1e-6)
    assert sum(values[index.spill[("H", t, "s1")]] for t in (1, 2)) == pytest.approx(0.0, abs=1e-6)
    for t, weight in ((1, 181.0), (2, 184.0)):
        energy = weight * hourly_values(yearly, solution, "g_hydro", "H", t=t).sum()
        assert energy == pytest.approx(values[index.u_hydro[("H", t, "s1")]], abs=1e-6)
    assert yearly.model.has_constraint(seasonal_name("water_balance", "H", 2, "s1"))


def test_parallel_paths_split_by_susceptance():
    system = PowerSystem(
        buses=[Bus(id="n1"), Bus(id="n2"), Bus(id="n3")],
        thermals=[ThermalPlant(id="G", bus_id="n1", g_max=200.0, op_cost=10.0)],
        lines=[line("L13", "n1", "n3"), line("L12", "n1", "n2"), line("L23", "n2", "n3")],
        demands=[DemandSpec(bus_id="n3", inelastic=90.0, deficit_cost=1000.0)],
    )
    yearly, solution = solve_yearly(make_instance(system))
    for line_id, expected in (("L13", 60.0), ("L12", 30.0), ("L23", 30.0)):
        net = (hourly_values(yearly, solution, "f_fwd", line_id)
               - hourly_values(yearly, solution, "f_bwd", line_id))
        np.testing.assert_allclose(net, expected, atol=1e-6)


def test_line_limit_leaves_deficit_and_prices_it():
    system = PowerSystem(
        buses=[Bus(id="n1"), Bus(id="n2")],
        thermals=[ThermalPlant(id="G", bus_id="n1", g_max=100.0, op_cost=10.0)],
        lines=[line("L", "n1", "n2", capacity=10.0)],
        demands=[DemandSpec(bus_id="n2", inelastic=13.0, deficit_cost=1000.0)],
    )
    yearly, solution = solve_yearly(make_instance(system))
    np.testing.assert_allclose(hourly_values(yearly, solution, "deficit", "n2"), 3.0, atol=1e-6)

    frame = dispatch_frame(yearly, solution, year=1)
    prices = frame[frame["family"] == "marginal_cost"].groupby("entity")["value"]
    np.testing.assert_allclose(prices.min()["n2"], 1000.0, rtol=1e-6)
    np.testing.assert_allclose(prices.max()["n1"], 10.0, rtol=1e-6)


def test_reserve_shortfall_is_penalised():
    system = thermal_system(load=50.0).model_copy(update={
        "reserve_requirements": [ReserveRequirement(id="R", thermal_ids=["G"], violation_penalty=100.0)],
    })
    instance = make_instance(system, scenarios=single_scenario(reserve_requirements={"R": 55.0}))
    yearly, solution = solve_yearly(instance)
    np.testing.assert_allclose(hourly_values(yearly, solution, "slack_reserve", "R"), 5.0, atol=1e-6)
    assert reserve_violation_energy(yearly, solution.values) == pytest.approx(YEAR_HOURS * 5.0)
    assert yearly.cost_breakdown(solution.values).violation == pytest.approx(YEAR_HOURS * 5.0 * 100.0)


def test_elastic_demand_is_served_when_cheaper_than_its_price():
    system = PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(id="G", bus_id="n1", g_max=100.0, op_cost=10.0)],
        demands=[DemandSpec(bus_id="n1", inelastic=50.0, deficit_cost=1000.0,
                            elastic_segments=[ElasticSegment(price=20.0, max_quantity=10.0),
                                              ElasticSegment(price=5.0, max_quantity=10.0)])],
    )
    yearly, solution = solve_yearly(make_instance(system))
    index, values = yearly.index, solution.values
    assert values[index.elastic[("n1", 1, 1, 1, 1, "s1")]] == pytest.approx(10.0)
    assert values[index.elastic[("n1", 2, 1, 1, 1, "s1")]] == pytest.approx(0.0, abs=1e-7)

    costs = yearly.cost_breakdown(values)
    assert costs.elastic_gain == pytest.approx(YEAR_HOURS * 10.0 * 20.0)
    assert costs.total == pytest.approx(solution.objective)


def test_generation_group_slack_relaxes_the_bound():
    system = thermal_system(load=50.0).model_copy(update={
        "generation_groups": [GenerationGroupConstraint(id="cap", thermal_ids=["G"], bound_kind="max",
                                                        threshold=45.0, violation_penalty=1.0)],
    })
    yearly, solution = solve_yearly(make_instance(system))
    np.testing.assert_allclose(hourly_values(yearly, solution, "slack_group", "cap"), 5.0, atol=1e-6)
    row = yearly.model.constraint(hourly_name("generation_group", "cap", 1, 1, 1, "s1"))
    assert row.sense == RowSense.LE
    assert row.coefficients[yearly.index.slack_group[("cap", 1, 1, 1, "s1")]] == -1.0


# ---------------------------------------------------------------------------- commitment, hydro, gating, reserves


def test_commitment_runs_one_contiguous_block():
    loaded = (7, 8, 9)
    load = [40.0 if h in loaded else 0.0 for h in HOURS]
    system = PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(id="U", bus_id="n1", g_min=20.0, g_max=100.0, op_cost=10.0,
                               startup_cost=10000.0, has_commitment=True),
                  ThermalPlant(id="P", bus_id="n1", g_max=100.0, op_cost=200.0)],
        demands=[DemandSpec(bus_id="n1", inelastic=load, deficit_cost=1000.0)],
    )
    yearly, solution = solve_yearly(make_instance(system))
    startups = hourly_values(yearly, solution, "startup", "U")
    commitment = hourly_values(yearly, solution, "gamma", "U")
    assert startups.sum() == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_allclose(commitment, [1.0 if h in loaded else 0.0 for h in HOURS], atol=1e-6)

    # every commitment pattern over the loaded hours, each dispatched by LP
    arrays = yearly.model.to_arrays()
    gamma = [yearly.index.gamma[("U", 1, 1, h, "s1")] for h in HOURS]
    patterns = []
    for pattern in itertools.product([0.0, 1.0], repeat=len(loaded)):
        col_lo, col_hi = arrays.col_lo.copy(), arrays.col_hi.copy()
        on = dict(zip(loaded, pattern))
        for h, column in zip(HOURS, gamma):
            col_lo[column] = col_hi[column] = on.get(h, 0.0)
        result = solve_lp_arrays(arrays, SolveConfig(), col_lo, col_hi)
        assert result.status == SolveStatus.OPTIMAL
        patterns.append((result.objective, pattern))
    best, best_pattern = min(patterns)
    assert solution.objective == pytest.approx(best, rel=1e-6)
    assert best_pattern == (1.0, 1.0, 1.0)
    cycling = dict((pattern, objective) for objective, pattern in patterns)[(1.0, 0.0, 1.0)]
    assert cycling > best


def test_upstream_release_flows_into_the_downstream_balance():
    system = thermal_system(load=50.0).model_copy(update={"hydros": [
        HydroPlant(id="A", bus_id="n1", v_max=50.0, u_max=1000.0, rho=1.0, g_max=100.0),
        HydroPlant(id="B", bus_id="n1", v_max=50.0, u_max=1000.0, rho=1.0, g_max=100.0, upstream_ids=["A"]),
    ]})
    yearly, solution = solve_yearly(make_instance(system, scenarios=single_scenario(inflows={"A": 10.0})))
    index, values = yearly.index, solution.values

    row = yearly.model.constraint(seasonal_name("water_balance", "B", 1, "s1"))
    assert row.coefficients[index.u_hydro[("A", 1, "s1")]] == -1.0
    assert row.coefficients[index.spill[("A", 1, "s1")]] == -1.0
    assert row.rhs == 0.0
    assert values[index.u_hydro[("A", 1, "s1")]] == pytest.approx(10.0, abs=1e-6)
    assert values[index.u_hydro[("B", 1, "s1")]] == pytest.approx(10.0, abs=1e-6)


def test_zero_inflow_releases_nothing_over_the_year():
    system = thermal_system(load=50.0).model_copy(update={
        "hydros": [HydroPlant(id="H", bus_id="n1", v_max=50.0, u_max=1000.0, rho=1.0, g_max=100.0)],
    })
    yearly, solution = solve_yearly(make_instance(system, structure=two_season_structure()))
    index, values = yearly.index, solution.values
    for t in (1, 2):
        assert values[index.u_hydro[("H", t, "s1")]] == pytest.approx(0.0, abs=1e-6)
        assert values[index.spill[("H", t, "s1")]] == pytest.approx(0.0, abs=1e-6)
        np.testing.assert_allclose(hourly_values(yearly, solution, "g_hydro", "H", t=t), 0.0, atol=1e-6)


def test_unbuilt_circuit_is_fully_detached():
    system = PowerSystem(
        buses=[Bus(id="n1"), Bus(id="n2"), Bus(id="n3")],
        thermals=[ThermalPlant(id="G", bus_id="n1", g_max=100.0, op_cost=10.0)],
        lines=[line("E12", "n1", "n2", capacity=20.0, susceptance=100.0),
               line("C13", "n1", "n3", capacity=50.0, susceptance=10.0)],
        demands=[DemandSpec(bus_id="n2", inelastic=30.0, deficit_cost=1000.0),
                 DemandSpec(bus_id="n3", inelastic=5.0, deficit_cost=1000.0)],
    )
    catalog = ProjectCatalog(projects=[Project(id="build_C13", target_id="C13", investment_cost=1e12)])
    options = FormulationOptions(theta_max=0.5)
    yearly, solution = solve_yearly(make_instance(system, catalog=catalog), options=options)
    model, values = yearly.model, solution.values

    assert values[yearly.index.x["build_C13"]] == pytest.approx(0.0, abs=1e-9)
    for family in ("f_fwd", "f_bwd"):
        np.testing.assert_allclose(hourly_values(yearly, solution, family, "C13"), 0.0, atol=1e-6)
    np.testing.assert_allclose(hourly_values(yearly, solution, "deficit", "n3"), 5.0, atol=1e-6)
    np.testing.assert_allclose(hourly_values(yearly, solution, "deficit", "n2"), 10.0, atol=1e-6)

    arrays = model.to_arrays()
    config = SolveConfig()
    col_lo, col_hi = fixed_integer_bounds(arrays, values)
    theta = [yearly.index.theta[("n3", 1, 1, h, "s1")] for h in HOURS]
    for bound in (0.5, -0.5):
        lo, hi = col_lo.copy(), col_hi.copy()
        lo[theta] = hi[theta] = bound
        pushed = solve_lp_arrays(arrays, config, lo, hi)
        assert pushed.status == SolveStatus.OPTIMAL
        assert pushed.objective == pytest.approx(solution.objective, rel=1e-6)

    # dropping the big-M rows of the unbuilt circuit changes nothing
    row_lo, row_hi = arrays.row_lo.copy(), arrays.row_hi.copy()
    for h in HOURS:
        for family in ("kvl_upper", "kvl_lower"):
            row = model.constraint(hourly_name(family, "C13", 1, 1, h, "s1")).index
            row_lo[row], row_hi[row] = -np.inf, np.inf
    relaxed = solve_lp_arrays(replace(arrays, row_lo=row_lo, row_hi=row_hi), config, col_lo, col_hi)
    assert relaxed.status == SolveStatus.OPTIMAL
    assert relaxed.objective == pytest.approx(solution.objective, rel=1e-6)


def reserve_system(penalty: float) -> PowerSystem:
    """Cheap G is the only reserve provider; serving reserve shifts energy to the 100/MWh peaker"""
    return PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(id="G", bus_id="n1", g_max=50.0, ramp_up=30.0, op_cost=10.0),
                  ThermalPlant(id="P", bus_id="n1", g_max=100.0, op_cost=100.0)],
        demands=[DemandSpec(bus_id="n1", inelastic=50.0, deficit_cost=1000.0)],
        reserve_requirements=[ReserveRequirement(id="R", thermal_ids=["G"], violation_penalty=penalty)],
    )


def test_reserve_headroom_respects_capacity_and_ramp():
    for requirement in (10.0, 40.0):
        instance = make_instance(reserve_system(200.0),
                                 scenarios=single_scenario(reserve_requirements={"R": requirement}))
        yearly, solution = solve_yearly(instance)
        generation = hourly_values(yearly, solution, "g_thermal", "G")
        reserve = hourly_values(yearly, solution, "r_thermal", "G")
        shortfall = hourly_values(yearly, solution, "slack_reserve", "R")

        assert np.all(reserve <= np.minimum(50.0 - generation, 30.0) + 1e-6)
        assert np.all(reserve + shortfall >= requirement - 1e-6)
        np.testing.assert_allclose(reserve, min(requirement, 30.0), atol=1e-6)
        np.testing.assert_allclose(shortfall, max(requirement - 30.0, 0.0), atol=1e-6)


def test_cheap_reserve_penalty_flips_to_violation():
    scenarios = single_scenario(reserve_requirements={"R": 10.0})

    held_yearly, held = solve_yearly(make_instance(reserve_system(200.0), scenarios=scenarios))
    np.testing.assert_allclose(hourly_values(held_yearly, held, "slack_reserve", "R"), 0.0, atol=1e-6)
    np.testing.assert_allclose(hourly_values(held_yearly, held, "g_thermal", "G"), 40.0, atol=1e-6)

    cheap_yearly, cheap = solve_yearly(make_instance(reserve_system(50.0), scenarios=scenarios))
    np.testing.assert_allclose(hourly_values(cheap_yearly, cheap, "slack_reserve", "R"), 10.0, atol=1e-6)
    np.testing.assert_allclose(hourly_values(cheap_yearly, cheap, "g_thermal", "G"), 50.0, atol=1e-6)
