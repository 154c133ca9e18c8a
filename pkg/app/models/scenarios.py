"""
Scenario Set
Multi-deterministic scenarios with their inflows, renewable profiles and reserve requirements
"""
from typing import Dict, List

from pydantic import Field

from app.models.profiles import HourlySeries, SeasonalSeries
from app.models.system import FrozenModel


class Scenario(FrozenModel):
    id: str
    probability: float


class ScenarioSet(FrozenModel):
    scenarios: List[Scenario]
    inflows: Dict[str, SeasonalSeries] = Field(default_factory=dict)              # hydro id -> hm3/season
    renewable_profiles: Dict[str, HourlySeries] = Field(default_factory=dict)     # renewable id -> MW or pu
    reserve_requirements: Dict[str, HourlySeries] = Field(default_factory=dict)   # requirement id -> MW

    @property
    def ids(self) -> List[str]:
        return [scenario.id for scenario in self.scenarios]

    def probability(self, scenario_id: str) -> float:
        for scenario in self.scenarios:
            if scenario.id == scenario_id:
                return scenario.probability
        raise KeyError(f"Unknown scenario '{scenario_id}'")

    def inflow(self, hydro_id: str, t: int, scenario_id: str) -> float:
        series = self.inflows.get(hydro_id)
        return 0.0 if series is None else series.at(t, scenario_id)
