"""
Hydro rows: cyclic seasonal water balance, production and soft operating limits
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name, seasonal_name
from app.milp.model import RowSense, RowSpec, merge_terms


def emit_hydro(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    structure = ctx.structure
    seasons = structure.num_seasons
    rows: List[RowSpec] = []

    for plant in (ctx.system.asset(hydro_id) for hydro_id in ctx.hydro_order):
        i = plant.id
        x = index.decision(ctx, i)
        for t in range(1, seasons + 1):
            key = (i, t, s)
            v, u, spill = index.v_hydro[key], index.u_hydro[key], index.spill[key]
            following = (i, t % seasons + 1, s)

            # storage after season t; the season after the last one is the first
            balance = [(index.v_hydro[following], 1.0), (v, -1.0), (u, 1.0), (spill, 1.0)]
            for upstream in plant.upstream_ids:
                balance += [(index.u_hydro[(upstream, t, s)], -1.0), (index.spill[(upstream, t, s)], -1.0)]
            rows.append(RowSpec(seasonal_name("water_balance", i, t, s), merge_terms(balance),
                                RowSense.EQ, ctx.scenarios.inflow(i, t, s)))

            production = [(index.g_hydro[(i, t, d, h, s)], structure.weight(t, d))
                          for d in range(1, len(structure.season(t).typical_days) + 1)
                          for h in structure.hours]
            production.append((u, -plant.rho))
            rows.append(RowSpec(seasonal_name("hydro_production", i, t, s), merge_terms(production),
                                RowSense.EQ, 0.0))

            rows.append(RowSpec(seasonal_name("storage_max", i, t, s),
                                merge_terms([(v, 1.0), (x, -plant.v_max)]), RowSense.LE, 0.0))
            rows.append(RowSpec(seasonal_name("storage_min", i, t, s),
                                merge_terms([(v, 1.0), (index.slack_storage[key], 1.0), (x, -plant.v_min)]),
                                RowSense.GE, 0.0))
            rows.append(RowSpec(seasonal_name("turbine_max", i, t, s),
                                merge_terms([(u, 1.0), (x, -plant.u_max)]), RowSense.LE, 0.0))
            rows.append(RowSpec(seasonal_name("turbine_min", i, t, s),
                                merge_terms([(u, 1.0), (index.slack_turbining[key], 1.0), (x, -plant.u_min)]),
                                RowSense.GE, 0.0))
            if plant.q_max is not None:
                rows.append(RowSpec(seasonal_name("outflow_max", i, t, s),
                                    merge_terms([(u, 1.0), (spill, 1.0), (x, -plant.q_max)]), RowSense.LE, 0.0))
            rows.append(RowSpec(seasonal_name("outflow_min", i, t, s),
                                merge_terms([(u, 1.0), (spill, 1.0), (index.slack_outflow[key], 1.0),
                                             (x, -plant.q_min)]),
                                RowSense.GE, 0.0))

        if plant.initial_storage_mode == "fixed":
            rows.append(RowSpec(seasonal_name("initial_storage", i, 1, s),
                                merge_terms([(index.v_hydro[(i, 1, s)], 1.0), (x, -(plant.initial_storage or 0.0))]),
                                RowSense.EQ, 0.0))

        for t, d, h in structure.periods():
            rows.append(RowSpec(hourly_name("hydro_gen_max", i, t, d, h, s),
                                merge_terms([(index.g_hydro[(i, t, d, h, s)], 1.0), (x, -plant.g_max)]),
                                RowSense.LE, 0.0))
    return rows
