"""
Objective: discounted expected operating cost plus investment annuities, collected per cost term
"""
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from app.formulation.context import FormulationContext
from app.formulation.index import VariableIndex
from app.models.plan import CostBreakdown

COST_TERMS = ("investment", "generation", "startup", "violation", "deficit", "elastic_gain")


@dataclass
class CostTerms:
    """Objective coefficients per term; ``elastic_gain`` is stored positive and subtracted"""
    terms: Dict[str, Dict[int, float]] = field(default_factory=lambda: {name: {} for name in COST_TERMS})

    def add(self, term: str, column: int, coefficient: float):
        if coefficient != 0.0:
            bucket = self.terms[term]
            bucket[column] = bucket.get(column, 0.0) + coefficient

    def objective(self) -> Dict[int, float]:
        merged: Dict[int, float] = {}
        for term, coefficients in self.terms.items():
            sign = -1.0 if term == "elastic_gain" else 1.0
            for column, value in coefficients.items():
                merged[column] = merged.get(column, 0.0) + sign * value
        return merged

    def breakdown(self, values: np.ndarray) -> CostBreakdown:
        return CostBreakdown(**{
            term: float(sum(value * values[column] for column, value in coefficients.items()))
            for term, coefficients in self.terms.items()
        })


def emit_objective(ctx: FormulationContext, index: VariableIndex) -> CostTerms:
    system = ctx.system
    costs = CostTerms()

    for project in ctx.catalog.projects:
        costs.add("investment", index.x[project.id], ctx.investment_coefficient(project))

    hourly = ctx.structure.periods
    for s in ctx.scenario_ids:
        for t, d, h in hourly():
            beta = ctx.beta(t, d, s)
            for plant in system.thermals:
                key = (plant.id, t, d, h, s)
                costs.add("generation", index.g_thermal[key], beta * plant.op_cost)
                if plant.has_commitment:
                    costs.add("startup", index.startup[key], beta * plant.startup_cost)
            for plant in system.hydros:
                costs.add("generation", index.g_hydro[(plant.id, t, d, h, s)], beta * plant.om_cost)
            for group in system.generation_groups:
                costs.add("violation", index.slack_group[(group.id, t, d, h, s)], beta * group.violation_penalty)
            for requirement in system.reserve_requirements:
                costs.add("violation", index.slack_reserve[(requirement.id, t, d, h, s)],
                          beta * requirement.violation_penalty)
            for demand in system.demands:
                costs.add("deficit", index.deficit[(demand.bus_id, t, d, h, s)], beta * demand.deficit_cost)
                for k, segment in enumerate(demand.elastic_segments, start=1):
                    costs.add("elastic_gain", index.elastic[(demand.bus_id, k, t, d, h, s)], beta * segment.price)

        # seasonal slacks carry no duration weight
        for t in range(1, ctx.structure.num_seasons + 1):
            weight = ctx.seasonal_weight(t, s)
            for plant in system.hydros:
                key = (plant.id, t, s)
                costs.add("violation", index.slack_storage[key], weight * plant.storage_penalty)
                costs.add("violation", index.slack_turbining[key], weight * plant.turbining_penalty)
                costs.add("violation", index.slack_outflow[key], weight * plant.outflow_penalty)

    return costs
