"""
Planning Instance
Everything one planning study needs: system, catalog, time structure, scenarios and horizon
"""
from typing import Dict, Optional

from pydantic import Field

from app.models.catalog import ProjectCatalog
from app.models.scenarios import ScenarioSet
from app.models.system import FrozenModel, PowerSystem
from app.models.time_structure import TimeStructure


class YearData(FrozenModel):
    """Per-year overrides; unset fields fall back to the base instance"""
    demand_multiplier: float = 1.0
    scenarios: Optional[ScenarioSet] = None


class StudyHorizon(FrozenModel):
    years: int = 1
    annual_discount_rate: float = 0.0
    year_data: Dict[int, YearData] = Field(default_factory=dict)

    def data(self, year: int) -> YearData:
        return self.year_data.get(year, YearData())

    def discount_factor(self, year: int) -> float:
        """(1 + r_a)^-(y-1), applied to reported plan costs"""
        return (1.0 + self.annual_discount_rate) ** (-(year - 1))


class Instance(FrozenModel):
    name: str = "instance"
    system: PowerSystem
    catalog: ProjectCatalog = Field(default_factory=ProjectCatalog)
    time_structure: TimeStructure
    scenarios: ScenarioSet
    horizon: StudyHorizon = Field(default_factory=StudyHorizon)

    def for_year(self, year: int) -> "Instance":
        """Instance with that year's demand growth and scenario data applied"""
        data = self.horizon.data(year)
        update = {}
        if data.demand_multiplier != 1.0:
            update["system"] = self.system.scaled_demand(data.demand_multiplier)
        if data.scenarios is not None:
            update["scenarios"] = data.scenarios
        return self.model_copy(update=update) if update else self

    def with_existing_assets(self) -> "Instance":
        catalog = self.catalog.with_existing_assets(self.system)
        return self if catalog is self.catalog else self.model_copy(update={"catalog": catalog})
