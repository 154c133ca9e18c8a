"""
Instance Validation
Invariant checks over system, catalog, time structure and scenarios
"""
import calendar
import logging
from collections import Counter
from typing import Dict, Iterable, List, Optional

import networkx as nx

from app.core.exceptions import PlannerError
from app.models.catalog import DecisionKind, ProjectCatalog
from app.models.instance import Instance
from app.models.profiles import HourlySeries
from app.models.report import ValidationReport
from app.models.scenarios import ScenarioSet
from app.models.system import HydroPlant, PowerSystem
from app.models.time_structure import NON_LEAP_YEAR, TimeStructure

logger = logging.getLogger(__name__)

PROBABILITY_TOLERANCE = 1e-9


class CascadeCycleError(PlannerError):
    """Upstream relation between hydro plants is not acyclic"""


def cascade_graph(hydros: Iterable[HydroPlant]) -> nx.DiGraph:
    """Directed graph upstream -> downstream over hydro ids"""
    graph = nx.DiGraph()
    for hydro in hydros:
        graph.add_node(hydro.id)
    for hydro in hydros:
        for upstream in hydro.upstream_ids:
            if upstream in graph:
                graph.add_edge(upstream, hydro.id)
    return graph


def topological_order(hydros: Iterable[HydroPlant]) -> List[str]:
    """Hydro ids with every plant after all of its upstream plants; ties in input order"""
    hydros = list(hydros)
    graph = cascade_graph(hydros)
    position = {hydro.id: index for index, hydro in enumerate(hydros)}
    try:
        return list(nx.lexicographical_topological_sort(graph, key=lambda node: position[node]))
    except nx.NetworkXUnfeasible:
        cycle = nx.find_cycle(graph)
        raise CascadeCycleError(f"hydro cascade cycle: {' -> '.join(edge[0] for edge in cycle)}") from None


def _check_unique(report: ValidationReport, kind: str, ids: List[str]):
    for entity_id, count in Counter(ids).items():
        if count > 1:
            report.error("duplicate_id", f"{kind} id '{entity_id}' is used {count} times", entity_id)


def _check_nonnegative(report: ValidationReport, entity_id: str, **values):
    for name, value in values.items():
        if value is not None and value < 0:
            report.error("negative_value", f"{name} must be >= 0 (got {value})", entity_id)


def _check_range(report: ValidationReport, entity_id: str, low_name: str, low, high_name: str, high):
    if low is not None and high is not None and low > high:
        report.error("inverted_bounds", f"{low_name} ({low}) exceeds {high_name} ({high})", entity_id)


def _series_min(series: HourlySeries) -> Optional[float]:
    values = series.all_values()
    return min(values) if values else None


def _check_system(system: PowerSystem, report: ValidationReport):
    bus_ids = {bus.id for bus in system.buses}
    area_ids = {area.id for area in system.areas}
    _check_unique(report, "bus", [bus.id for bus in system.buses])
    _check_unique(report, "area", [area.id for area in system.areas])
    asset_ids = ([t.id for t in system.thermals] + [h.id for h in system.hydros] + [r.id for r in system.renewables]
                 + [b.id for b in system.batteries] + [line.id for line in system.lines])
    _check_unique(report, "asset", asset_ids)

    for bus in system.buses:
        if bus.area_id is not None and bus.area_id not in area_ids:
            report.error("unknown_area", f"bus '{bus.id}' references unknown area '{bus.area_id}'", bus.id)
    for area in system.areas:
        _check_nonnegative(report, area.id, import_min=area.import_min, import_max=area.import_max,
                           export_min=area.export_min, export_max=area.export_max)
        _check_range(report, area.id, "import_min", area.import_min, "import_max", area.import_max)
        _check_range(report, area.id, "export_min", area.export_min, "export_max", area.export_max)

    for entity in system.thermals + system.hydros + system.renewables + system.batteries:
        if entity.bus_id not in bus_ids:
            report.error("unknown_bus", f"'{entity.id}' references unknown bus '{entity.bus_id}'", entity.id)

    for thermal in system.thermals:
        _check_nonnegative(report, thermal.id, g_min=thermal.g_min, ramp_up=thermal.ramp_up,
                           ramp_down=thermal.ramp_down, op_cost=thermal.op_cost, startup_cost=thermal.startup_cost)
        _check_range(report, thermal.id, "g_min", thermal.g_min, "g_max", thermal.g_max)
        if thermal.g_min > 0 and not thermal.has_commitment:
            report.warn("ignored_minimum", f"thermal '{thermal.id}' has g_min > 0 without commitment; "
                                           "the minimum is not enforced", thermal.id)

    hydro_ids = {hydro.id for hydro in system.hydros}
    for hydro in system.hydros:
        _check_nonnegative(report, hydro.id, v_min=hydro.v_min, u_min=hydro.u_min, q_min=hydro.q_min,
                           g_max=hydro.g_max, om_cost=hydro.om_cost, storage_penalty=hydro.storage_penalty,
                           turbining_penalty=hydro.turbining_penalty, outflow_penalty=hydro.outflow_penalty)
        _check_range(report, hydro.id, "v_min", hydro.v_min, "v_max", hydro.v_max)
        _check_range(report, hydro.id, "u_min", hydro.u_min, "u_max", hydro.u_max)
        _check_range(report, hydro.id, "q_min", hydro.q_min, "q_max", hydro.q_max)
        if hydro.rho <= 0:
            report.error("invalid_rho", f"hydro '{hydro.id}' needs rho > 0 (got {hydro.rho})", hydro.id)
        for upstream in hydro.upstream_ids:
            if upstream not in hydro_ids:
                report.error("unknown_hydro", f"hydro '{hydro.id}' lists unknown upstream plant '{upstream}'", hydro.id)
        if hydro.initial_storage_mode == "fixed":
            if hydro.initial_storage is None:
                report.error("missing_initial_storage", f"hydro '{hydro.id}' uses fixed initial storage "
                                                        "without a value", hydro.id)
            else:
                _check_range(report, hydro.id, "initial_storage", hydro.initial_storage, "v_max", hydro.v_max)
    try:
        topological_order(system.hydros)
    except CascadeCycleError as e:
        report.error("hydro_cascade_cycle", str(e))

    for renewable in system.renewables:
        if renewable.capacity <= 0:
            report.error("invalid_capacity", f"renewable '{renewable.id}' needs capacity > 0", renewable.id)

    for battery in system.batteries:
        _check_nonnegative(report, battery.id, v_max=battery.v_max, charge_max=battery.charge_max,
                           discharge_max=battery.discharge_max)
        for name, eta in (("eta_charge", battery.eta_charge), ("eta_discharge", battery.eta_discharge)):
            if not 0.0 < eta <= 1.0:
                report.error("invalid_efficiency", f"{name} must lie in (0, 1] (got {eta})", battery.id)

    for line in system.lines:
        for end in (line.from_bus, line.to_bus):
            if end not in bus_ids:
                report.error("unknown_bus", f"line '{line.id}' references unknown bus '{end}'", line.id)
        if line.from_bus == line.to_bus:
            report.error("self_loop", f"line '{line.id}' starts and ends at bus '{line.from_bus}'", line.id)
        _check_nonnegative(report, line.id, f_max_fwd=line.f_max_fwd, f_max_bwd=line.f_max_bwd)
        if line.is_circuit and (line.susceptance is None or line.susceptance <= 0):
            report.error("invalid_susceptance", f"circuit '{line.id}' needs susceptance > 0", line.id)

    _check_unique(report, "demand bus", [demand.bus_id for demand in system.demands])
    for demand in system.demands:
        if demand.bus_id not in bus_ids:
            report.error("unknown_bus", f"demand references unknown bus '{demand.bus_id}'", demand.bus_id)
        lowest = _series_min(demand.inelastic)
        if lowest is not None and lowest < 0:
            report.error("negative_demand", f"inelastic demand at '{demand.bus_id}' has negative values", demand.bus_id)
        for segment in demand.elastic_segments:
            lowest = _series_min(segment.max_quantity)
            if lowest is not None and lowest < 0:
                report.error("negative_value", f"elastic segment at '{demand.bus_id}' has negative caps", demand.bus_id)
        top_price = max((segment.price for segment in demand.elastic_segments), default=None)
        if top_price is not None and demand.deficit_cost <= top_price:
            report.error("deficit_cost_too_low", f"deficit cost {demand.deficit_cost} at '{demand.bus_id}' must exceed "
                                                 f"every elastic price (max {top_price})", demand.bus_id)

    thermal_ids = {thermal.id for thermal in system.thermals}
    battery_ids = {battery.id for battery in system.batteries}
    _check_unique(report, "generation group", [group.id for group in system.generation_groups])
    for group in system.generation_groups:
        _check_members(report, group.id, "thermal", group.thermal_ids, thermal_ids)
        _check_members(report, group.id, "hydro", group.hydro_ids, hydro_ids)
        _check_nonnegative(report, group.id, threshold=group.threshold, violation_penalty=group.violation_penalty)
    _check_unique(report, "reserve requirement", [req.id for req in system.reserve_requirements])
    for requirement in system.reserve_requirements:
        _check_members(report, requirement.id, "thermal", requirement.thermal_ids, thermal_ids)
        _check_members(report, requirement.id, "hydro", requirement.hydro_ids, hydro_ids)
        _check_members(report, requirement.id, "battery", requirement.battery_ids, battery_ids)
        _check_nonnegative(report, requirement.id, violation_penalty=requirement.violation_penalty)


def _check_members(report: ValidationReport, owner: str, kind: str, members: List[str], known: set):
    for member in members:
        if member not in known:
            report.error("unknown_member", f"'{owner}' references unknown {kind} '{member}'", owner)


def _check_catalog(system: PowerSystem, catalog: ProjectCatalog, report: ValidationReport):
    assets = system.assets()
    project_ids = {project.id for project in catalog.projects}
    _check_unique(report, "project", [project.id for project in catalog.projects])
    _check_unique(report, "project target", [project.target_id for project in catalog.projects])

    for project in catalog.projects:
        if project.target_id not in assets:
            report.error("unknown_target", f"project '{project.id}' targets unknown asset '{project.target_id}'",
                         project.id)
        _check_nonnegative(report, project.id, investment_cost=project.investment_cost)
        if project.lifetime_years is not None and project.lifetime_years < 1:
            report.error("invalid_lifetime", f"project '{project.id}' needs lifetime_years >= 1", project.id)
        _check_range(report, project.id, "earliest_year", project.earliest_year, "latest_year", project.latest_year)
        if project.decision_kind == DecisionKind.CONTINUOUS:
            asset = system.asset(project.target_id)
            if assets.get(project.target_id) == "thermal" and asset.has_commitment:
                report.error("continuous_commitment", f"continuous decision on thermal '{asset.id}' is incompatible "
                                                      "with thermal commitment", project.id)

    def known(project_id: str, owner: str):
        if project_id not in project_ids:
            report.error("unknown_project", f"{owner} references unknown project '{project_id}'", project_id)

    for pair in catalog.precedences:
        known(pair.before, "precedence")
        known(pair.after, "precedence")
    for pair in catalog.associations:
        known(pair.primary, "association")
        known(pair.dependent, "association")
    for group in catalog.exclusivities:
        if len(group.project_ids) < 2:
            report.error("small_exclusivity", f"exclusivity '{group.id}' needs at least 2 projects", group.id or None)
        for project_id in group.project_ids:
            known(project_id, f"exclusivity '{group.id}'")
    for constraint in catalog.capacity_constraints:
        for project_id in constraint.members():
            known(project_id, f"capacity constraint '{constraint.id}'")
        _check_range(report, constraint.id, "lower", constraint.lower, "upper", constraint.upper)


def _check_scenarios(system: PowerSystem, scenarios: ScenarioSet, report: ValidationReport,
                     structure: Optional[TimeStructure]):
    if not scenarios.scenarios:
        report.error("no_scenarios", "at least one scenario is required")
        return
    _check_unique(report, "scenario", scenarios.ids)
    total = sum(scenario.probability for scenario in scenarios.scenarios)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        report.error("probability_sum", f"scenario probabilities sum to {total!r}, expected 1")
    for scenario in scenarios.scenarios:
        if scenario.probability < 0:
            report.error("negative_probability", f"scenario '{scenario.id}' has negative probability", scenario.id)

    hourly: Dict[str, HourlySeries] = {}
    for renewable in system.renewables:
        series = scenarios.renewable_profiles.get(renewable.id)
        if series is None:
            report.error("missing_profile", f"renewable '{renewable.id}' has no profile", renewable.id)
        else:
            hourly[renewable.id] = series
    for requirement in system.reserve_requirements:
        series = scenarios.reserve_requirements.get(requirement.id)
        if series is None:
            report.error("missing_requirement", f"reserve requirement '{requirement.id}' has no hourly values",
                         requirement.id)
        else:
            hourly[requirement.id] = series
    for demand in system.demands:
        hourly[f"demand@{demand.bus_id}"] = demand.inelastic
        for position, segment in enumerate(demand.elastic_segments, start=1):
            hourly[f"elastic{position}@{demand.bus_id}"] = segment.max_quantity

    for owner, series in hourly.items():
        lowest = _series_min(series)
        if lowest is not None and lowest < 0:
            report.error("negative_profile", f"series of '{owner}' has negative values", owner)
    for hydro_id, series in scenarios.inflows.items():
        values = series.all_values()
        if values and min(values) < 0:
            report.error("negative_profile", f"inflows of '{hydro_id}' have negative values", hydro_id)

    if structure is None:
        return
    for owner, series in hourly.items():
        missing = next(((t, d, h, s) for t, d, h in structure.periods() for s in scenarios.ids
                        if series.get(t, d, h, s) is None), None)
        if missing is not None:
            report.error("incomplete_profile", f"series of '{owner}' has no value for (season, typical day, hour, "
                                               f"scenario) = {missing}", owner)
    for hydro in system.hydros:
        series = scenarios.inflows.get(hydro.id)
        if series is None:
            continue
        missing = next(((t, s) for t in range(1, structure.num_seasons + 1) for s in scenarios.ids
                        if series.get(t, s) is None), None)
        if missing is not None:
            report.error("incomplete_profile", f"inflows of '{hydro.id}' have no value for (season, scenario) = "
                                               f"{missing}", hydro.id)


def check_time_structure(structure: TimeStructure, report: ValidationReport):
    """Duration weights >= 1 and each season's weights summing to its calendar days"""
    months = [month for season in structure.seasons for month in season.months]
    if sorted(months) != list(range(1, 13)):
        report.error("month_partition", "season months must cover every month exactly once")
    calendar_year = structure.calendar_year if structure.calendar_year is not None else NON_LEAP_YEAR
    for t, season in enumerate(structure.seasons, start=1):
        if not season.typical_days:
            report.error("empty_season", f"season '{season.name}' has no typical days", season.name)
            continue
        for typical_day in season.typical_days:
            if typical_day.weight < 1:
                report.error("invalid_weight", f"typical day '{typical_day.name}' of season '{season.name}' "
                                               f"has weight {typical_day.weight} < 1", season.name)
        expected = sum(calendar.monthrange(calendar_year, month)[1] for month in season.months if 1 <= month <= 12)
        total = sum(typical_day.weight for typical_day in season.typical_days)
        if abs(total - expected) > 1e-9:
            report.error("weight_partition", f"season '{season.name}' weights sum to {total}, "
                                             f"expected {expected} calendar days", season.name)


def _check_network(system: PowerSystem, catalog: ProjectCatalog, report: ValidationReport):
    """Warn about buses that only candidate lines connect to the rest of the grid"""
    if not system.lines:
        return
    existing_targets = {project.target_id for project in catalog.projects if project.existing}
    projected = {project.target_id for project in catalog.projects}
    full = nx.Graph()
    built = nx.Graph()
    full.add_nodes_from(bus.id for bus in system.buses)
    built.add_nodes_from(bus.id for bus in system.buses)
    for line in system.lines:
        full.add_edge(line.from_bus, line.to_bus)
        if line.id in existing_targets or line.id not in projected:
            built.add_edge(line.from_bus, line.to_bus)
    for component in nx.connected_components(full):
        islands = [sorted(part) for part in nx.connected_components(built.subgraph(component))]
        if len(islands) > 1:
            islands.sort()
            for island in islands[1:]:
                report.warn("candidate_only_island", f"buses {', '.join(island)} connect to the grid only through "
                                                     "candidate lines", island[0])


def validate_system(system: PowerSystem, catalog: ProjectCatalog, scenarios: ScenarioSet,
                    structure: Optional[TimeStructure] = None) -> ValidationReport:
    """All invariant violations of the instance; an empty ``findings`` list means well-formed"""
    report = ValidationReport()
    _check_system(system, report)
    _check_catalog(system, catalog, report)
    _check_scenarios(system, scenarios, report, structure)
    if structure is not None:
        check_time_structure(structure, report)
    _check_network(system, catalog, report)
    logger.debug(f"Validation produced {len(report.findings)} error(s), {len(report.warnings)} warning(s)")
    return report


def validate_instance(instance: Instance) -> ValidationReport:
    """validate_system plus horizon checks on entry windows and per-year scenario data"""
    report = validate_system(instance.system, instance.catalog, instance.scenarios, instance.time_structure)
    horizon = instance.horizon
    if horizon.years < 1:
        report.error("invalid_horizon", f"horizon needs at least one year (got {horizon.years})")
    if horizon.annual_discount_rate < 0:
        report.error("negative_value", "annual_discount_rate must be >= 0")
    for project in instance.catalog.projects:
        if project.earliest_year < 1 or project.earliest_year > max(horizon.years, 1):
            report.error("window_outside_horizon", f"project '{project.id}' earliest_year {project.earliest_year} "
                                                   f"is outside years 1..{horizon.years}", project.id)
        if project.latest_year is not None and project.latest_year > horizon.years:
            report.error("window_outside_horizon", f"project '{project.id}' latest_year {project.latest_year} "
                                                   f"is outside years 1..{horizon.years}", project.id)
    for year, data in sorted(horizon.year_data.items()):
        if year < 1 or year > horizon.years:
            report.error("invalid_year", f"year_data given for year {year} outside the horizon")
        if data.demand_multiplier < 0:
            report.error("negative_value", f"demand_multiplier of year {year} must be >= 0")
        if data.scenarios is not None:
            yearly = ValidationReport()
            _check_scenarios(instance.system, data.scenarios, yearly, instance.time_structure)
            for finding in yearly.findings:
                report.error(finding.code, f"year {year}: {finding.message}", finding.entity)
    return report
