from .profiles import HOURS_PER_DAY, HourlySeries, SeasonalSeries
from .system import (
    Area,
    Battery,
    BoundKind,
    Bus,
    DemandSpec,
    ElasticSegment,
    GenerationGroupConstraint,
    HydroPlant,
    LineKind,
    PowerSystem,
    RenewablePlant,
    ReserveRequirement,
    ThermalPlant,
    TransmissionLine,
)
from .catalog import (
    Association,
    CapacityBasis,
    CapacityConstraint,
    DecisionKind,
    Exclusivity,
    Precedence,
    Project,
    ProjectCatalog,
    capacity_weight,
)
from .time_structure import Season, TimeStructure, TypicalDay
from .scenarios import Scenario, ScenarioSet
from .instance import Instance, StudyHorizon, YearData
from .plan import COST_COLUMNS, CostBreakdown, ExpansionPlan, ProjectDecision, YearSummary
from .report import Finding, Severity, ValidationReport

__all__ = [
    'HOURS_PER_DAY',
    'HourlySeries',
    'SeasonalSeries',
    'Area',
    'Battery',
    'BoundKind',
    'Bus',
    'DemandSpec',
    'ElasticSegment',
    'GenerationGroupConstraint',
    'HydroPlant',
    'LineKind',
    'PowerSystem',
    'RenewablePlant',
    'ReserveRequirement',
    'ThermalPlant',
    'TransmissionLine',
    'Association',
    'CapacityBasis',
    'CapacityConstraint',
    'DecisionKind',
    'Exclusivity',
    'Precedence',
    'Project',
    'ProjectCatalog',
    'capacity_weight',
    'Season',
    'TimeStructure',
    'TypicalDay',
    'Scenario',
    'ScenarioSet',
    'Instance',
    'StudyHorizon',
    'YearData',
    'COST_COLUMNS',
    'CostBreakdown',
    'ExpansionPlan',
    'ProjectDecision',
    'YearSummary',
    'Finding',
    'Severity',
    'ValidationReport',
]
