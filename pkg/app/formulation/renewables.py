"""
Renewable availability rows; curtailment is the gap between g and the available profile
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms


def emit_renewables(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    rows: List[RowSpec] = []
    for plant in ctx.system.renewables:
        x = index.decision(ctx, plant.id)
        for t, d, h in ctx.structure.periods():
            available = ctx.renewable_available(plant.id, t, d, h, s)
            rows.append(RowSpec(hourly_name("renewable_max", plant.id, t, d, h, s),
                                merge_terms([(index.g_renewable[(plant.id, t, d, h, s)], 1.0), (x, -available)]),
                                RowSense.LE, 0.0))
    return rows
