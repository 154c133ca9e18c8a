from app.formulation.builder import SCENARIO_FAMILIES, YearlyModel, build_yearly_model, dump_index
from app.formulation.context import FormulationContext, FormulationOptions, previous_hour
from app.formulation.index import VariableIndex, decision_name, expected_variable_count, hourly_name, seasonal_name
from app.formulation.objective import COST_TERMS, CostTerms, emit_objective

__all__ = [
    "SCENARIO_FAMILIES",
    "YearlyModel",
    "build_yearly_model",
    "dump_index",
    "FormulationContext",
    "FormulationOptions",
    "previous_hour",
    "VariableIndex",
    "decision_name",
    "expected_variable_count",
    "hourly_name",
    "seasonal_name",
    "COST_TERMS",
    "CostTerms",
    "emit_objective",
]
