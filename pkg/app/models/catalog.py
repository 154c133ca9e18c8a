"""
Project Catalog
Investment candidates, existing assets and the logic linking their decisions
"""
from enum import Enum
from typing import Dict, List, Optional

from pydantic import Field

from app.models.system import FrozenModel, PowerSystem


class DecisionKind(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"
    OBLIGATORY = "obligatory"


class Project(FrozenModel):
    """Investment decision on one asset (plant, battery or line).

    ``investment_cost`` is the capex; with ``lifetime_years`` the yearly
    objective charges its annuity, without it the cost is taken as annual.
    """
    id: str
    target_id: str
    investment_cost: float = 0.0
    lifetime_years: Optional[int] = None
    decision_kind: DecisionKind = DecisionKind.BINARY
    existing: bool = False
    earliest_year: int = 1
    latest_year: Optional[int] = None
    firm_energy: Optional[float] = None
    firm_capacity: Optional[float] = None

    @property
    def is_candidate(self) -> bool:
        return not self.existing

    def in_window(self, year: int) -> bool:
        return year >= self.earliest_year and (self.latest_year is None or year <= self.latest_year)


class Precedence(FrozenModel):
    """``before`` must be built for ``after`` to be built"""
    before: str
    after: str


class Association(FrozenModel):
    """``dependent`` may only be built together with ``primary``"""
    primary: str
    dependent: str


class Exclusivity(FrozenModel):
    id: str = ""
    project_ids: List[str]


class CapacityBasis(str, Enum):
    INSTALLED_CAPACITY = "installed_capacity"
    FIRM_ENERGY = "firm_energy"
    FIRM_CAPACITY = "firm_capacity"


class CapacityConstraint(FrozenModel):
    """Bounds on a weighted sum of decisions.

    Weights come from ``coefficients`` when given, otherwise from ``basis``
    applied to each project. ``years`` restricts the constraint to those
    planning years (all years when omitted).
    """
    id: str
    project_ids: List[str] = Field(default_factory=list)
    coefficients: Dict[str, float] = Field(default_factory=dict)
    basis: CapacityBasis = CapacityBasis.INSTALLED_CAPACITY
    lower: Optional[float] = None
    upper: Optional[float] = None
    years: Optional[List[int]] = None

    def members(self) -> List[str]:
        ordered = list(self.project_ids)
        ordered.extend(project_id for project_id in self.coefficients if project_id not in self.project_ids)
        return ordered

    def applies_to(self, year: Optional[int]) -> bool:
        return self.years is None or year is None or year in self.years


class ProjectCatalog(FrozenModel):
    projects: List[Project] = Field(default_factory=list)
    precedences: List[Precedence] = Field(default_factory=list)
    exclusivities: List[Exclusivity] = Field(default_factory=list)
    associations: List[Association] = Field(default_factory=list)
    capacity_constraints: List[CapacityConstraint] = Field(default_factory=list)

    def project(self, project_id: str) -> Optional[Project]:
        return next((project for project in self.projects if project.id == project_id), None)

    def by_target(self) -> Dict[str, Project]:
        return {project.target_id: project for project in self.projects}

    @property
    def candidates(self) -> List[Project]:
        return [project for project in self.projects if project.is_candidate]

    def with_existing_assets(self, system: PowerSystem) -> "ProjectCatalog":
        """Catalog where every asset without a project gets an existing project fixed at 1"""
        targets = {project.target_id for project in self.projects}
        missing = [asset_id for asset_id in system.assets() if asset_id not in targets]
        if not missing:
            return self
        taken = {project.id for project in self.projects}
        added = []
        for asset_id in missing:
            project_id = asset_id if asset_id not in taken else f"existing_{asset_id}"
            taken.add(project_id)
            added.append(Project(id=project_id, target_id=asset_id, existing=True))
        return self.model_copy(update={"projects": list(self.projects) + added})


def capacity_weight(project: Project, system: PowerSystem, constraint: CapacityConstraint) -> float:
    """Weight w of ``project`` in ``constraint``"""
    if project.id in constraint.coefficients:
        return constraint.coefficients[project.id]
    if constraint.basis == CapacityBasis.FIRM_ENERGY:
        return project.firm_energy or 0.0
    if constraint.basis == CapacityBasis.FIRM_CAPACITY:
        return project.firm_capacity or 0.0
    asset = system.asset(project.target_id)
    if asset is None:
        return 0.0
    for attribute in ("g_max", "capacity", "discharge_max", "f_max_fwd"):
        if hasattr(asset, attribute):
            return float(getattr(asset, attribute))
    return 0.0
