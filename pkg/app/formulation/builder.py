"""
Yearly Model Builder
Assembles the co-optimisation MILP of one planning year
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from app.formulation.batteries import emit_batteries
from app.formulation.context import FormulationContext, FormulationOptions
from app.formulation.groups import emit_generation_groups
from app.formulation.hydro import emit_hydro
from app.formulation.index import VariableIndex
from app.formulation.investment import emit_investment_logic
from app.formulation.load_balance import emit_load_balance
from app.formulation.network import emit_network
from app.formulation.objective import CostTerms, emit_objective
from app.formulation.renewables import emit_renewables
from app.formulation.reserves import emit_reserves
from app.formulation.thermal import emit_thermal
from app.milp.model import MilpModel, RowSpec
from app.models.instance import Instance
from app.models.plan import CostBreakdown

logger = logging.getLogger(__name__)

ScenarioEmitter = Callable[[FormulationContext, VariableIndex, str], List[RowSpec]]

# Appended in this order, scenario by scenario within each family
SCENARIO_FAMILIES: List[ScenarioEmitter] = [
    emit_thermal,
    emit_hydro,
    emit_renewables,
    emit_batteries,
    emit_network,
    emit_generation_groups,
    emit_reserves,
    emit_load_balance,
]


@dataclass
class YearlyModel:
    model: MilpModel
    index: VariableIndex
    context: FormulationContext
    cost_terms: CostTerms

    def cost_breakdown(self, values: np.ndarray) -> CostBreakdown:
        return self.cost_terms.breakdown(values)


def build_yearly_model(instance: Instance, fixed_decisions: Optional[Mapping[str, float]] = None,
                       options: Optional[FormulationOptions] = None, year: Optional[int] = None) -> YearlyModel:
    """Build and seal the investment + operation model.

    ``fixed_decisions`` pins projects to a value through tight bounds; a
    conflicting pin shows up as infeasibility at solve time. With ``year``
    set, projects outside their entry window are pinned to 0 and capacity
    targets restricted to other years are skipped.
    """
    started = time.perf_counter()
    ctx = FormulationContext(instance=instance, year=year, fixed_decisions=dict(fixed_decisions or {}),
                             options=options or FormulationOptions())
    name = instance.name if year is None else f"{instance.name}_y{year}"
    model = MilpModel(name)

    index = VariableIndex.build(model, ctx)
    model.add_rows(emit_investment_logic(ctx, index))

    scenarios = ctx.scenario_ids
    workers = min(ctx.options.workers, len(scenarios))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for emit in SCENARIO_FAMILIES:
                for rows in pool.map(lambda s, emit=emit: emit(ctx, index, s), scenarios):
                    model.add_rows(rows)
    else:
        for emit in SCENARIO_FAMILIES:
            for s in scenarios:
                model.add_rows(emit(ctx, index, s))

    cost_terms = emit_objective(ctx, index)
    model.set_objective(cost_terms.objective())
    model.seal()

    logger.info(f"Built '{name}': {model.num_variables} variables ({model.num_binaries} binary), "
                f"{model.num_constraints} constraints in {time.perf_counter() - started:.2f}s")
    return YearlyModel(model=model, index=index, context=ctx, cost_terms=cost_terms)


def dump_index(yearly: YearlyModel) -> Dict[str, Dict[str, int]]:
    return yearly.index.to_dict(yearly.model)
