"""
Network rows: flow limits, disjunctive DC power flow for circuits and area interchange limits
"""
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms


def emit_network(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    rows: List[RowSpec] = []
    theta_max = ctx.options.theta_max

    for line in ctx.system.lines:
        k = line.id
        x = index.decision(ctx, k)
        big_m = (line.susceptance or 0.0) * 2.0 * theta_max
        for t, d, h in ctx.structure.periods():
            key = (k, t, d, h, s)
            fwd, bwd = index.f_fwd[key], index.f_bwd[key]
            rows.append(RowSpec(hourly_name("flow_fwd_max", k, t, d, h, s),
                                merge_terms([(fwd, 1.0), (x, -line.f_max_fwd)]), RowSense.LE, 0.0))
            rows.append(RowSpec(hourly_name("flow_bwd_max", k, t, d, h, s),
                                merge_terms([(bwd, 1.0), (x, -line.f_max_bwd)]), RowSense.LE, 0.0))
            if not line.is_circuit:
                continue

            # |f+ - f- - B (theta_from - theta_to)| <= M (1 - x)
            angle_from = index.theta[(line.from_bus, t, d, h, s)]
            angle_to = index.theta[(line.to_bus, t, d, h, s)]
            flow = [(fwd, 1.0), (bwd, -1.0), (angle_from, -line.susceptance), (angle_to, line.susceptance)]
            rows.append(RowSpec(hourly_name("kvl_upper", k, t, d, h, s),
                                merge_terms(flow + [(x, big_m)]), RowSense.LE, big_m))
            rows.append(RowSpec(hourly_name("kvl_lower", k, t, d, h, s),
                                merge_terms(flow + [(x, -big_m)]), RowSense.GE, -big_m))

    for area in ctx.system.areas:
        entering, leaving = ctx.area_crossings(area.id)
        for t, d, h in ctx.structure.periods():
            imports = merge_terms([(index.f_fwd[(line.id, t, d, h, s)], 1.0) for line in entering]
                                  + [(index.f_bwd[(line.id, t, d, h, s)], 1.0) for line in leaving])
            exports = merge_terms([(index.f_fwd[(line.id, t, d, h, s)], 1.0) for line in leaving]
                                  + [(index.f_bwd[(line.id, t, d, h, s)], 1.0) for line in entering])
            for row in (RowSpec.between(hourly_name("area_import", area.id, t, d, h, s), imports,
                                        area.import_min, area.import_max),
                        RowSpec.between(hourly_name("area_export", area.id, t, d, h, s), exports,
                                        area.export_min, area.export_max)):
                if row is not None:
                    rows.append(row)
    return rows
