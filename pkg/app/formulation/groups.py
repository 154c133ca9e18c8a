"""
Generation group rows: soft minimum or maximum output of a set of thermal and hydro plants
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms
from app.models.system import BoundKind


def emit_generation_groups(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    rows: List[RowSpec] = []
    for group in ctx.system.generation_groups:
        is_min = group.bound_kind == BoundKind.MIN
        for t, d, h in ctx.structure.periods():
            terms = [(index.g_thermal[(j, t, d, h, s)], 1.0) for j in group.thermal_ids]
            terms += [(index.g_hydro[(i, t, d, h, s)], 1.0) for i in group.hydro_ids]
            # the slack always relaxes the bound
            terms.append((index.slack_group[(group.id, t, d, h, s)], 1.0 if is_min else -1.0))
            rows.append(RowSpec(hourly_name("generation_group", group.id, t, d, h, s), merge_terms(terms),
                                RowSense.GE if is_min else RowSense.LE, group.threshold))
    return rows
