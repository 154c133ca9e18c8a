"""
Reporting Service
Turns a solved yearly model into cost summaries and a long-format dispatch table
"""
import logging
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from app.formulation.builder import YearlyModel
from app.formulation.index import HourlyKey, hourly_name
from app.milp.solution import Solution
from app.models.plan import YearSummary

logger = logging.getLogger(__name__)

DISPATCH_COLUMNS = ["year", "scenario", "season", "typical_day", "hour", "family", "entity", "value"]

# (label in the dispatch table, VariableIndex attribute)
HOURLY_FAMILIES = [
    ("g_thermal", "g_thermal"),
    ("commitment", "gamma"),
    ("startup", "startup"),
    ("g_hydro", "g_hydro"),
    ("g_renewable", "g_renewable"),
    ("battery_storage", "v_battery"),
    ("battery_charge", "q_charge"),
    ("battery_discharge", "q_discharge"),
    ("flow_fwd", "f_fwd"),
    ("flow_bwd", "f_bwd"),
    ("angle", "theta"),
    ("deficit", "deficit"),
    ("reserve_thermal", "r_thermal"),
    ("reserve_hydro", "r_hydro"),
    ("reserve_battery", "r_battery"),
    ("reserve_shortfall", "slack_reserve"),
    ("group_violation", "slack_group"),
]
SEASONAL_FAMILIES = [
    ("hydro_storage", "v_hydro"),
    ("hydro_turbined", "u_hydro"),
    ("hydro_spill", "spill"),
    ("storage_violation", "slack_storage"),
    ("turbining_violation", "slack_turbining"),
    ("outflow_violation", "slack_outflow"),
]


def _expected_energy(yearly: YearlyModel, values: np.ndarray, columns: Dict[HourlyKey, int]) -> float:
    """Probability-weighted annual energy, Σ p_s D_{t,d} value"""
    ctx = yearly.context
    probability = {s.id: s.probability for s in ctx.scenarios.scenarios}
    return float(sum(probability[s] * ctx.structure.weight(t, d) * values[column]
                     for (_, t, d, _, s), column in columns.items()))


def deficit_energy(yearly: YearlyModel, values: np.ndarray) -> float:
    return _expected_energy(yearly, values, yearly.index.deficit)


def reserve_violation_energy(yearly: YearlyModel, values: np.ndarray) -> float:
    return _expected_energy(yearly, values, yearly.index.slack_reserve)


def curtailment_energy(yearly: YearlyModel, values: np.ndarray) -> float:
    """Expected energy between renewable availability (gated by x) and dispatch"""
    ctx, index = yearly.context, yearly.index
    probability = {s.id: s.probability for s in ctx.scenarios.scenarios}
    total = 0.0
    for (plant_id, t, d, h, s), column in index.g_renewable.items():
        built = values[index.decision(ctx, plant_id)]
        spare = ctx.renewable_available(plant_id, t, d, h, s) * built - values[column]
        total += probability[s] * ctx.structure.weight(t, d) * max(spare, 0.0)
    return float(total)


def summarize_year(year: int, yearly: YearlyModel, solution: Solution, discount_factor: float = 1.0,
                   new_projects: Optional[List[str]] = None) -> YearSummary:
    values = solution.values
    return YearSummary(
        year=year,
        status=solution.status.value,
        objective=solution.objective,
        bound=None if np.isnan(solution.bound) else solution.bound,
        gap=None if np.isnan(solution.gap) else solution.gap,
        costs=yearly.cost_breakdown(values),
        discount_factor=discount_factor,
        deficit_energy=deficit_energy(yearly, values),
        reserve_violation=reserve_violation_energy(yearly, values),
        curtailment=curtailment_energy(yearly, values),
        new_projects=list(new_projects or []),
    )


def dispatch_frame(yearly: YearlyModel, solution: Solution, year: Optional[int] = None) -> pd.DataFrame:
    """One row per (scenario, t, d, h, family, entity); seasonal families use typical_day = hour = 0.

    ``marginal_cost`` rows are load-balance duals divided by β, i.e. $/MWh.
    """
    ctx, index, values = yearly.context, yearly.index, solution.values
    year = 1 if year is None else year
    records = []
    for label, attribute in HOURLY_FAMILIES:
        for (entity, t, d, h, s), column in getattr(index, attribute).items():
            records.append((year, s, t, d, h, label, entity, float(values[column])))
    for label, attribute in SEASONAL_FAMILIES:
        for (entity, t, s), column in getattr(index, attribute).items():
            records.append((year, s, t, 0, 0, label, entity, float(values[column])))
    for (bus, segment, t, d, h, s), column in index.elastic.items():
        records.append((year, s, t, d, h, "elastic_demand", f"{bus}#{segment}", float(values[column])))

    if solution.duals.size:
        model = yearly.model
        for s in ctx.scenario_ids:
            for bus in ctx.system.buses:
                for t, d, h in ctx.structure.periods():
                    row = model.constraint(hourly_name("load_balance", bus.id, t, d, h, s))
                    price = solution.duals[row.index] / ctx.beta(t, d, s)
                    records.append((year, s, t, d, h, "marginal_cost", bus.id, float(price)))

    frame = pd.DataFrame.from_records(records, columns=DISPATCH_COLUMNS)
    logger.debug(f"Dispatch table for year {year}: {len(frame)} row(s)")
    return frame
