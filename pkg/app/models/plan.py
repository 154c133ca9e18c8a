"""
Expansion Plan
Investment decisions by year and the per-year operation summary
"""
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

COST_COLUMNS = ["investment", "generation", "startup", "violation", "deficit", "elastic_gain", "total"]


class CostBreakdown(BaseModel):
    """Objective split by term; ``total`` subtracts the elastic gain"""
    investment: float = 0.0
    generation: float = 0.0
    startup: float = 0.0
    violation: float = 0.0
    deficit: float = 0.0
    elastic_gain: float = 0.0

    @property
    def total(self) -> float:
        return (self.investment + self.generation + self.startup + self.violation
                + self.deficit - self.elastic_gain)

    def as_row(self) -> Dict[str, float]:
        row = self.model_dump()
        row["total"] = self.total
        return row


class ProjectDecision(BaseModel):
    project_id: str
    target_id: str
    decision_year: Optional[int] = None  # None: never built
    value: float = 0.0
    existing: bool = False


class YearSummary(BaseModel):
    year: int
    status: str
    objective: float
    bound: Optional[float] = None
    gap: Optional[float] = None
    costs: CostBreakdown
    discount_factor: float = 1.0
    deficit_energy: float = 0.0
    reserve_violation: float = 0.0
    curtailment: float = 0.0
    new_projects: List[str] = Field(default_factory=list)

    @property
    def present_value(self) -> float:
        return self.costs.total * self.discount_factor


class ExpansionPlan(BaseModel):
    instance: str
    decisions: List[ProjectDecision] = Field(default_factory=list)
    years: List[YearSummary] = Field(default_factory=list)

    def decision(self, project_id: str) -> Optional[ProjectDecision]:
        return next((d for d in self.decisions if d.project_id == project_id), None)

    def built_by(self, year: int) -> Dict[str, float]:
        """Projects decided in or before ``year`` with their decision values"""
        return {
            d.project_id: d.value
            for d in self.decisions
            if d.decision_year is not None and d.decision_year <= year
        }

    @property
    def total_present_value(self) -> float:
        return sum(summary.present_value for summary in self.years)
