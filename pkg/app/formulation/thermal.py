"""
Thermal rows: generation limits, unit commitment, start-ups and ramps
"""
from typing import List

from app.formulation.context import FormulationContext, previous_hour
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec


def emit_thermal(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    rows: List[RowSpec] = []
    for plant in ctx.system.thermals:
        j = plant.id
        x = index.decision(ctx, j)
        for t, d, h in ctx.structure.periods():
            key = (j, t, d, h, s)
            prev = (j, t, d, previous_hour(h), s)
            g = index.g_thermal[key]

            if plant.has_commitment:
                gamma = index.gamma[key]
                rows.append(RowSpec(hourly_name("thermal_min", j, t, d, h, s),
                                    {g: 1.0, gamma: -plant.g_min}, RowSense.GE, 0.0))
                rows.append(RowSpec(hourly_name("thermal_max", j, t, d, h, s),
                                    {g: 1.0, gamma: -plant.g_max}, RowSense.LE, 0.0))
                rows.append(RowSpec(hourly_name("commit_invest", j, t, d, h, s),
                                    {gamma: 1.0, x: -1.0}, RowSense.LE, 0.0))
                rows.append(RowSpec(hourly_name("startup", j, t, d, h, s),
                                    {index.startup[key]: 1.0, gamma: -1.0, index.gamma[prev]: 1.0},
                                    RowSense.GE, 0.0))
            else:
                rows.append(RowSpec(hourly_name("thermal_max", j, t, d, h, s),
                                    {g: 1.0, x: -plant.g_max}, RowSense.LE, 0.0))

            if plant.ramp_up is not None:
                rows.append(RowSpec(hourly_name("ramp_up", j, t, d, h, s),
                                    {g: 1.0, index.g_thermal[prev]: -1.0}, RowSense.LE, plant.ramp_up))
            if plant.ramp_down is not None:
                rows.append(RowSpec(hourly_name("ramp_down", j, t, d, h, s),
                                    {index.g_thermal[prev]: 1.0, g: -1.0}, RowSense.LE, plant.ramp_down))
    return rows
