"""
Load balance rows: supply, storage and net imports meet inelastic demand at every bus and hour
"""
from collections import defaultdict
from typing import List

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex, hourly_name
from app.milp.model import RowSense, RowSpec, merge_terms


def emit_load_balance(ctx: FormulationContext, index: VariableIndex, s: str) -> List[RowSpec]:
    system = ctx.system
    at_bus = defaultdict(lambda: defaultdict(list))
    for family, entities in (("thermal", system.thermals), ("hydro", system.hydros),
                             ("renewable", system.renewables), ("battery", system.batteries)):
        for entity in entities:
            at_bus[entity.bus_id][family].append(entity)

    rows: List[RowSpec] = []
    for bus in system.buses:
        n = bus.id
        local = at_bus[n]
        demand = system.demand_at(n)
        for t, d, h in ctx.structure.periods():
            terms = [(index.g_thermal[(p.id, t, d, h, s)], 1.0) for p in local["thermal"]]
            terms += [(index.g_hydro[(p.id, t, d, h, s)], 1.0) for p in local["hydro"]]
            terms += [(index.g_renewable[(p.id, t, d, h, s)], 1.0) for p in local["renewable"]]
            for battery in local["battery"]:
                key = (battery.id, t, d, h, s)
                terms += [(index.q_discharge[key], battery.eta_discharge), (index.q_charge[key], -1.0)]
            for line in ctx.lines_into[n]:
                key = (line.id, t, d, h, s)
                terms += [(index.f_fwd[key], 1.0), (index.f_bwd[key], -1.0)]
            for line in ctx.lines_out_of[n]:
                key = (line.id, t, d, h, s)
                terms += [(index.f_fwd[key], -1.0), (index.f_bwd[key], 1.0)]

            load = 0.0
            if demand is not None:
                load = demand.inelastic.at(t, d, h, s)
                terms.append((index.deficit[(n, t, d, h, s)], 1.0))
                terms += [(index.elastic[(n, k, t, d, h, s)], -1.0)
                          for k in range(1, len(demand.elastic_segments) + 1)]
            rows.append(RowSpec(hourly_name("load_balance", n, t, d, h, s), merge_terms(terms), RowSense.EQ, load))
    return rows
