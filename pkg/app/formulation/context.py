"""
Formulation Context
Read-only lookups shared by every emitter of one yearly model
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.models.catalog import DecisionKind, Project, ProjectCatalog
from app.models.instance import Instance
from app.models.system import PowerSystem, TransmissionLine
from app.services.annuity import annualize_cost
from app.services.validation import topological_order

logger = logging.getLogger(__name__)


class FormulationOptions(BaseModel):
    """Formulation knobs; defaults come from the application settings"""

    model_config = ConfigDict(frozen=True)

    theta_max: float = Field(default_factory=lambda: settings.THETA_MAX, gt=0)
    workers: int = Field(default_factory=lambda: settings.FORMULATION_WORKERS, ge=1)


def previous_hour(h: int) -> int:
    """Hour before ``h`` inside a cyclic 24-hour typical day"""
    return 24 if h == 1 else h - 1


@dataclass
class FormulationContext:
    instance: Instance
    year: Optional[int] = None
    fixed_decisions: Dict[str, float] = field(default_factory=dict)
    options: FormulationOptions = field(default_factory=FormulationOptions)

    def __post_init__(self):
        self.instance = self.instance.with_existing_assets()

    # ------------------------------------------------------------------ shortcuts

    @property
    def system(self) -> PowerSystem:
        return self.instance.system

    @property
    def catalog(self) -> ProjectCatalog:
        return self.instance.catalog

    @property
    def structure(self):
        return self.instance.time_structure

    @property
    def scenarios(self):
        return self.instance.scenarios

    @property
    def scenario_ids(self) -> List[str]:
        return self.instance.scenarios.ids

    @cached_property
    def project_of(self) -> Dict[str, Project]:
        """Asset id -> its project"""
        return self.catalog.by_target()

    @cached_property
    def reserve_members(self) -> Dict[str, set]:
        return self.system.reserve_members()

    @cached_property
    def hydro_order(self) -> List[str]:
        return topological_order(self.system.hydros)

    # ------------------------------------------------------------------ project bounds

    def decision_bounds(self, project: Project) -> Tuple[float, float]:
        """Bounds of x for this year: existing, decided, outside window, obligatory, else free"""
        if project.existing:
            return 1.0, 1.0
        if project.id in self.fixed_decisions:
            value = float(self.fixed_decisions[project.id])
            return value, value
        if self.year is not None and not project.in_window(self.year):
            return 0.0, 0.0
        if project.decision_kind == DecisionKind.OBLIGATORY:
            return 1.0, 1.0
        return 0.0, 1.0

    def investment_coefficient(self, project: Project) -> float:
        if project.investment_cost == 0.0:
            return 0.0
        if project.lifetime_years is None:
            return project.investment_cost
        return annualize_cost(project.investment_cost, project.lifetime_years,
                              self.instance.horizon.annual_discount_rate)

    # ------------------------------------------------------------------ weights

    @cached_property
    def _betas(self) -> Dict[Tuple[int, int, str], float]:
        structure, scenarios = self.structure, self.scenarios
        return {
            (t, d, s.id): s.probability * structure.weight(t, d) * structure.season_discount(t)
            for t, d in structure.days()
            for s in scenarios.scenarios
        }

    def beta(self, t: int, d: int, s: str) -> float:
        return self._betas[(t, d, s)]

    def seasonal_weight(self, t: int, s: str) -> float:
        """p_s / (1 + rt)^(t-1) for seasonal slacks"""
        return self.scenarios.probability(s) * self.structure.season_discount(t)

    # ------------------------------------------------------------------ data lookups

    def renewable_available(self, renewable_id: str, t: int, d: int, h: int, s: str) -> float:
        plant = self.system.asset(renewable_id)
        value = self.scenarios.renewable_profiles[renewable_id].at(t, d, h, s)
        return value * plant.capacity if plant.profile_unit == "pu" else value

    def reserve_requirement(self, requirement_id: str, t: int, d: int, h: int, s: str) -> float:
        series = self.scenarios.reserve_requirements.get(requirement_id)
        return 0.0 if series is None else series.at(t, d, h, s)

    # ------------------------------------------------------------------ network

    @cached_property
    def lines_into(self) -> Dict[str, List[TransmissionLine]]:
        incidence: Dict[str, List[TransmissionLine]] = {bus.id: [] for bus in self.system.buses}
        for line in self.system.lines:
            incidence.setdefault(line.to_bus, []).append(line)
        return incidence

    @cached_property
    def lines_out_of(self) -> Dict[str, List[TransmissionLine]]:
        incidence: Dict[str, List[TransmissionLine]] = {bus.id: [] for bus in self.system.buses}
        for line in self.system.lines:
            incidence.setdefault(line.from_bus, []).append(line)
        return incidence

    @cached_property
    def reference_buses(self) -> set:
        """Lowest bus id of every connected component of the circuit graph"""
        graph = nx.Graph()
        graph.add_nodes_from(bus.id for bus in self.system.buses)
        graph.add_edges_from((line.from_bus, line.to_bus) for line in self.system.lines if line.is_circuit)
        references = {min(component) for component in nx.connected_components(graph)}
        logger.debug(f"Reference buses: {sorted(references)}")
        return references

    @cached_property
    def area_of(self) -> Dict[str, Optional[str]]:
        return {bus.id: bus.area_id for bus in self.system.buses}

    def area_crossings(self, area_id: str) -> Tuple[List[TransmissionLine], List[TransmissionLine]]:
        """Lines entering the area (to-bus inside) and leaving it (from-bus inside)"""
        entering, leaving = [], []
        for line in self.system.lines:
            from_inside = self.area_of.get(line.from_bus) == area_id
            to_inside = self.area_of.get(line.to_bus) == area_id
            if to_inside and not from_inside:
                entering.append(line)
            elif from_inside and not to_inside:
                leaving.append(line)
        return entering, leaving
