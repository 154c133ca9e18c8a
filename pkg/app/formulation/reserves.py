"""
Reserve rows: headroom of each contributing unit and the requirement balance per product
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms


def emit_reserves(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    system = ctx.system
    members = ctx.reserve_members
    structure = ctx.structure
    rows: List[RowSpec] = []

    for plant in system.thermals:
        if plant.id not in members["thermal"]:
            continue
        x = index.decision(ctx, plant.id)
        for t, d, h in structure.periods():
            key = (plant.id, t, d, h, s)
            gate = index.gamma[key] if plant.has_commitment else x
            rows.append(RowSpec(hourly_name("thermal_headroom", plant.id, t, d, h, s),
                                merge_terms([(index.g_thermal[key], 1.0), (index.r_thermal[key], 1.0),
                                             (gate, -plant.g_max)]),
                                RowSense.LE, 0.0))

    for plant in system.hydros:
        if plant.id not in members["hydro"]:
            continue
        x = index.decision(ctx, plant.id)
        for t, d, h in structure.periods():
            key = (plant.id, t, d, h, s)
            rows.append(RowSpec(hourly_name("hydro_headroom", plant.id, t, d, h, s),
                                merge_terms([(index.g_hydro[key], 1.0), (index.r_hydro[key], 1.0),
                                             (x, -plant.g_max)]),
                                RowSense.LE, 0.0))

    for battery in system.batteries:
        if battery.id not in members["battery"]:
            continue
        x = index.decision(ctx, battery.id)
        eta = battery.eta_discharge
        for t, d, h in structure.periods():
            key = (battery.id, t, d, h, s)
            reserve = index.r_battery[key]
            rows.append(RowSpec(hourly_name("battery_headroom", battery.id, t, d, h, s),
                                merge_terms([(index.q_discharge[key], eta), (reserve, 1.0),
                                             (x, -eta * battery.discharge_max)]),
                                RowSense.LE, 0.0))
            rows.append(RowSpec(hourly_name("battery_energy_reserve", battery.id, t, d, h, s),
                                merge_terms([(reserve, 1.0), (index.v_battery[key], -eta)]),
                                RowSense.LE, 0.0))

    for requirement in system.reserve_requirements:
        for t, d, h in structure.periods():
            terms = [(index.r_thermal[(j, t, d, h, s)], 1.0) for j in requirement.thermal_ids]
            terms += [(index.r_hydro[(i, t, d, h, s)], 1.0) for i in requirement.hydro_ids]
            terms += [(index.r_battery[(b, t, d, h, s)], 1.0) for b in requirement.battery_ids]
            terms.append((index.slack_reserve[(requirement.id, t, d, h, s)], 1.0))
            rows.append(RowSpec(hourly_name("reserve_balance", requirement.id, t, d, h, s), merge_terms(terms),
                                RowSense.GE, ctx.reserve_requirement(requirement.id, t, d, h, s)))
    return rows
