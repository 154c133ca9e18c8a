"""
Power System Model
Buses, areas, plants, storage, lines, demands and the operating group constraints
"""
from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.profiles import HourlySeries


class FrozenModel(BaseModel):
    """Immutable base for every domain record"""

    model_config = ConfigDict(frozen=True, extra="forbid")


class Bus(FrozenModel):
    id: str
    name: str = ""
    area_id: Optional[str] = None


class Area(FrozenModel):
    id: str
    name: str = ""
    import_min: Optional[float] = None
    import_max: Optional[float] = None
    export_min: Optional[float] = None
    export_max: Optional[float] = None


class ThermalPlant(FrozenModel):
    """Thermal unit; ramps of None mean the ramp rows are not emitted"""
    id: str
    bus_id: str
    g_min: float = 0.0
    g_max: float
    ramp_up: Optional[float] = None
    ramp_down: Optional[float] = None
    op_cost: float = 0.0
    startup_cost: float = 0.0
    has_commitment: bool = False


class HydroPlant(FrozenModel):
    """Reservoir plant with seasonal water balance (volumes in hm3 per season)"""
    id: str
    bus_id: str
    v_min: float = 0.0
    v_max: float
    u_min: float = 0.0
    u_max: float
    q_min: float = 0.0
    q_max: Optional[float] = None
    rho: float
    g_max: float
    upstream_ids: List[str] = Field(default_factory=list)
    om_cost: float = 0.0

    # Violation penalties for the soft minimums
    storage_penalty: float = 0.0
    turbining_penalty: float = 0.0
    outflow_penalty: float = 0.0

    initial_storage_mode: Literal["free", "fixed"] = "free"
    initial_storage: Optional[float] = None


class RenewablePlant(FrozenModel):
    """Variable renewable plant; ``profile_unit`` says whether profiles are MW or per unit of capacity"""
    id: str
    bus_id: str
    capacity: float
    profile_unit: Literal["mw", "pu"] = "mw"


class Battery(FrozenModel):
    id: str
    bus_id: str
    v_max: float
    charge_max: float
    discharge_max: float
    eta_charge: float = 1.0
    eta_discharge: float = 1.0


class LineKind(str, Enum):
    CIRCUIT = "circuit"
    DC_LINK = "dc_link"


class TransmissionLine(FrozenModel):
    """Line from ``from_bus`` to ``to_bus``; forward flow runs from -> to"""
    id: str
    from_bus: str
    to_bus: str
    kind: LineKind = LineKind.CIRCUIT
    f_max_fwd: float
    f_max_bwd: float
    susceptance: Optional[float] = None

    @property
    def is_circuit(self) -> bool:
        return self.kind == LineKind.CIRCUIT


class ElasticSegment(FrozenModel):
    price: float
    max_quantity: HourlySeries


class DemandSpec(FrozenModel):
    bus_id: str
    inelastic: HourlySeries
    elastic_segments: List[ElasticSegment] = Field(default_factory=list)
    deficit_cost: float

    def scaled(self, factor: float) -> "DemandSpec":
        """Demand grown by ``factor`` (inelastic load and elastic caps alike)"""
        return self.model_copy(update={
            "inelastic": self.inelastic.scaled(factor),
            "elastic_segments": [
                segment.model_copy(update={"max_quantity": segment.max_quantity.scaled(factor)})
                for segment in self.elastic_segments
            ],
        })


class BoundKind(str, Enum):
    MIN = "min"
    MAX = "max"


class GenerationGroupConstraint(FrozenModel):
    id: str
    thermal_ids: List[str] = Field(default_factory=list)
    hydro_ids: List[str] = Field(default_factory=list)
    bound_kind: BoundKind
    threshold: float
    violation_penalty: float = 0.0


class ReserveRequirement(FrozenModel):
    """Reserve product; the hourly requirement lives in ``ScenarioSet.reserve_requirements``"""
    id: str
    thermal_ids: List[str] = Field(default_factory=list)
    hydro_ids: List[str] = Field(default_factory=list)
    battery_ids: List[str] = Field(default_factory=list)
    violation_penalty: float = 0.0


class PowerSystem(FrozenModel):
    """The static world consumed by the formulation"""

    buses: List[Bus] = Field(default_factory=list)
    areas: List[Area] = Field(default_factory=list)
    thermals: List[ThermalPlant] = Field(default_factory=list)
    hydros: List[HydroPlant] = Field(default_factory=list)
    renewables: List[RenewablePlant] = Field(default_factory=list)
    batteries: List[Battery] = Field(default_factory=list)
    lines: List[TransmissionLine] = Field(default_factory=list)
    demands: List[DemandSpec] = Field(default_factory=list)
    generation_groups: List[GenerationGroupConstraint] = Field(default_factory=list)
    reserve_requirements: List[ReserveRequirement] = Field(default_factory=list)

    def assets(self) -> Dict[str, str]:
        """Investable entity id -> kind (thermal, hydro, renewable, battery, line)"""
        kinds: Dict[str, str] = {}
        for kind, entities in (("thermal", self.thermals), ("hydro", self.hydros),
                               ("renewable", self.renewables), ("battery", self.batteries),
                               ("line", self.lines)):
            for entity in entities:
                kinds.setdefault(entity.id, kind)
        return kinds

    def asset(self, asset_id: str):
        for entities in (self.thermals, self.hydros, self.renewables, self.batteries, self.lines):
            for entity in entities:
                if entity.id == asset_id:
                    return entity
        return None

    def demand_at(self, bus_id: str) -> Optional[DemandSpec]:
        return next((demand for demand in self.demands if demand.bus_id == bus_id), None)

    def reserve_members(self) -> Dict[str, set]:
        """Entity ids that carry a reserve variable, per family"""
        members = {"thermal": set(), "hydro": set(), "battery": set()}
        for requirement in self.reserve_requirements:
            members["thermal"].update(requirement.thermal_ids)
            members["hydro"].update(requirement.hydro_ids)
            members["battery"].update(requirement.battery_ids)
        return members

    def scaled_demand(self, factor: float) -> "PowerSystem":
        if factor == 1.0:
            return self
        return self.model_copy(update={"demands": [demand.scaled(factor) for demand in self.demands]})

    def __repr__(self):
        return (f"<PowerSystem(buses={len(self.buses)}, thermals={len(self.thermals)}, hydros={len(self.hydros)}, "
                f"renewables={len(self.renewables)}, batteries={len(self.batteries)}, lines={len(self.lines)})>")
