"""
Battery rows: hourly state of charge, cyclic within each typical day, and capacity gates
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms
from app.models.profiles import HOURS_PER_DAY


def emit_batteries(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    rows: List[RowSpec] = []
    for battery in ctx.system.batteries:
        b = battery.id
        x = index.decision(ctx, b)
        for t, d, h in ctx.structure.periods():
            key = (b, t, d, h, s)
            v, charge, discharge = index.v_battery[key], index.q_charge[key], index.q_discharge[key]
            following = index.v_battery[(b, t, d, h % HOURS_PER_DAY + 1, s)]

            rows.append(RowSpec(hourly_name("battery_balance", b, t, d, h, s),
                                merge_terms([(following, 1.0), (v, -1.0), (charge, -battery.eta_charge),
                                             (discharge, 1.0)]),
                                RowSense.EQ, 0.0))
            rows.append(RowSpec(hourly_name("battery_storage_max", b, t, d, h, s),
                                merge_terms([(v, 1.0), (x, -battery.v_max)]), RowSense.LE, 0.0))
            rows.append(RowSpec(hourly_name("battery_charge_max", b, t, d, h, s),
                                merge_terms([(charge, 1.0), (x, -battery.charge_max)]), RowSense.LE, 0.0))
            rows.append(RowSpec(hourly_name("battery_discharge_max", b, t, d, h, s),
                                merge_terms([(discharge, 1.0), (x, -battery.discharge_max)]), RowSense.LE, 0.0))
    return rows
