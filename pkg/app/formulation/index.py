"""
Variable Index
Creates every column of a yearly model and maps semantic coordinates to column indices
"""
import logging
from dataclasses import dataclass, field, fields
from typing import Dict, Tuple

from app.formulation.context import FormulationContext
from app.milp.model import INF, MilpModel, VarType
from app.models.catalog import DecisionKind

logger = logging.getLogger(__name__)

HourlyKey = Tuple[str, int, int, int, str]          # (entity, t, d, h, scenario)
SeasonalKey = Tuple[str, int, str]                  # (entity, t, scenario)
SegmentKey = Tuple[str, int, int, int, int, str]    # (bus, segment, t, d, h, scenario)


def hourly_name(family: str, entity: str, t: int, d: int, h: int, s: str) -> str:
    return f"{family}[{t},{d},{h},{s},{entity}]"


def seasonal_name(family: str, entity: str, t: int, s: str) -> str:
    return f"{family}[{t},{s},{entity}]"


def decision_name(project_id: str) -> str:
    return f"x[{project_id}]"


@dataclass
class VariableIndex:
    """Column handles by family; hourly families are keyed (entity, t, d, h, s)"""

    x: Dict[str, int] = field(default_factory=dict)

    # thermal
    gamma: Dict[HourlyKey, int] = field(default_factory=dict)
    startup: Dict[HourlyKey, int] = field(default_factory=dict)
    g_thermal: Dict[HourlyKey, int] = field(default_factory=dict)
    r_thermal: Dict[HourlyKey, int] = field(default_factory=dict)

    # hydro
    v_hydro: Dict[SeasonalKey, int] = field(default_factory=dict)
    u_hydro: Dict[SeasonalKey, int] = field(default_factory=dict)
    spill: Dict[SeasonalKey, int] = field(default_factory=dict)
    slack_storage: Dict[SeasonalKey, int] = field(default_factory=dict)
    slack_turbining: Dict[SeasonalKey, int] = field(default_factory=dict)
    slack_outflow: Dict[SeasonalKey, int] = field(default_factory=dict)
    g_hydro: Dict[HourlyKey, int] = field(default_factory=dict)
    r_hydro: Dict[HourlyKey, int] = field(default_factory=dict)

    g_renewable: Dict[HourlyKey, int] = field(default_factory=dict)

    # batteries
    v_battery: Dict[HourlyKey, int] = field(default_factory=dict)
    q_charge: Dict[HourlyKey, int] = field(default_factory=dict)
    q_discharge: Dict[HourlyKey, int] = field(default_factory=dict)
    r_battery: Dict[HourlyKey, int] = field(default_factory=dict)

    # network
    f_fwd: Dict[HourlyKey, int] = field(default_factory=dict)
    f_bwd: Dict[HourlyKey, int] = field(default_factory=dict)
    theta: Dict[HourlyKey, int] = field(default_factory=dict)

    # demand and operating slacks
    deficit: Dict[HourlyKey, int] = field(default_factory=dict)
    elastic: Dict[SegmentKey, int] = field(default_factory=dict)
    slack_group: Dict[HourlyKey, int] = field(default_factory=dict)
    slack_reserve: Dict[HourlyKey, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(len(getattr(self, f.name)) for f in fields(self))

    def decision(self, ctx: FormulationContext, asset_id: str) -> int:
        """Column of the investment decision gating ``asset_id``"""
        return self.x[ctx.project_of[asset_id].id]

    def to_dict(self, model: MilpModel) -> Dict[str, Dict[str, int]]:
        """Family -> {variable name: column}, for JSON dumps"""
        return {
            f.name: {model.variables[column].name: column for column in getattr(self, f.name).values()}
            for f in fields(self)
        }

    @classmethod
    def build(cls, model: MilpModel, ctx: FormulationContext) -> "VariableIndex":
        """Create all columns in a fixed order: decisions, then per scenario each family"""
        index = cls()
        system = ctx.system
        members = ctx.reserve_members
        theta_max = ctx.options.theta_max

        for project in ctx.catalog.projects:
            lower, upper = ctx.decision_bounds(project)
            if project.existing or project.decision_kind == DecisionKind.CONTINUOUS:
                vtype = VarType.CONTINUOUS
            else:
                vtype = VarType.BINARY
            index.x[project.id] = model.add_variable(decision_name(project.id), lower, upper, vtype).index

        def hourly(target: Dict, family: str, entity: str, s: str, lower=0.0, upper=INF, vtype=VarType.CONTINUOUS):
            for t, d, h in ctx.structure.periods():
                target[(entity, t, d, h, s)] = model.add_variable(
                    hourly_name(family, entity, t, d, h, s), lower, upper, vtype).index

        def seasonal(target: Dict, family: str, entity: str, s: str):
            for t in range(1, ctx.structure.num_seasons + 1):
                target[(entity, t, s)] = model.add_variable(seasonal_name(family, entity, t, s)).index

        for s in ctx.scenario_ids:
            for plant in system.thermals:
                hourly(index.g_thermal, "g_thermal", plant.id, s)
                if plant.has_commitment:
                    hourly(index.gamma, "gamma", plant.id, s, vtype=VarType.BINARY, upper=1.0)
                    hourly(index.startup, "st", plant.id, s, upper=1.0)
                if plant.id in members["thermal"]:
                    ramp = INF if plant.ramp_up is None else plant.ramp_up
                    hourly(index.r_thermal, "r_thermal", plant.id, s, upper=ramp)

            for plant in system.hydros:
                seasonal(index.v_hydro, "v_hydro", plant.id, s)
                seasonal(index.u_hydro, "u_hydro", plant.id, s)
                seasonal(index.spill, "spill", plant.id, s)
                seasonal(index.slack_storage, "dv_hydro", plant.id, s)
                seasonal(index.slack_turbining, "du_hydro", plant.id, s)
                seasonal(index.slack_outflow, "dq_hydro", plant.id, s)
                hourly(index.g_hydro, "g_hydro", plant.id, s)
                if plant.id in members["hydro"]:
                    hourly(index.r_hydro, "r_hydro", plant.id, s)

            for plant in system.renewables:
                hourly(index.g_renewable, "g_renewable", plant.id, s)

            for battery in system.batteries:
                hourly(index.v_battery, "v_battery", battery.id, s)
                hourly(index.q_charge, "q_charge", battery.id, s)
                hourly(index.q_discharge, "q_discharge", battery.id, s)
                if battery.id in members["battery"]:
                    hourly(index.r_battery, "r_battery", battery.id, s)

            for line in system.lines:
                hourly(index.f_fwd, "f_fwd", line.id, s)
                hourly(index.f_bwd, "f_bwd", line.id, s)

            for bus in system.buses:
                if bus.id in ctx.reference_buses:
                    hourly(index.theta, "theta", bus.id, s, lower=0.0, upper=0.0)
                else:
                    hourly(index.theta, "theta", bus.id, s, lower=-theta_max, upper=theta_max)

            for demand in system.demands:
                for t, d, h in ctx.structure.periods():
                    load = demand.inelastic.at(t, d, h, s)
                    index.deficit[(demand.bus_id, t, d, h, s)] = model.add_variable(
                        hourly_name("deficit", demand.bus_id, t, d, h, s), 0.0, max(load, 0.0)).index
                for k, segment in enumerate(demand.elastic_segments, start=1):
                    for t, d, h in ctx.structure.periods():
                        cap = segment.max_quantity.at(t, d, h, s)
                        index.elastic[(demand.bus_id, k, t, d, h, s)] = model.add_variable(
                            hourly_name("elastic", f"{demand.bus_id},{k}", t, d, h, s), 0.0, max(cap, 0.0)).index

            for group in system.generation_groups:
                hourly(index.slack_group, "d_group", group.id, s)
            for requirement in system.reserve_requirements:
                hourly(index.slack_reserve, "d_reserve", requirement.id, s)

        logger.debug(f"Created {index.size} variables")
        return index


def expected_variable_count(ctx: FormulationContext) -> int:
    """Closed-form column count of the yearly model"""
    system = ctx.system
    members = ctx.reserve_members
    per_hour = (
        sum(1 + (2 if plant.has_commitment else 0) + (1 if plant.id in members["thermal"] else 0)
            for plant in system.thermals)
        + sum(1 + (1 if plant.id in members["hydro"] else 0) for plant in system.hydros)
        + len(system.renewables)
        + sum(3 + (1 if battery.id in members["battery"] else 0) for battery in system.batteries)
        + 2 * len(system.lines)
        + len(system.buses)
        + sum(1 + len(demand.elastic_segments) for demand in system.demands)
        + len(system.generation_groups)
        + len(system.reserve_requirements)
    )
    per_season = 6 * len(system.hydros)
    structure = ctx.structure
    hours = structure.num_typical_days * len(structure.hours)
    scenarios = len(ctx.scenario_ids)
    return len(ctx.catalog.projects) + scenarios * (hours * per_hour + structure.num_seasons * per_season)
