"""
Shared toy-instance builders for the test suite
"""
import pytest

from app.core.config import settings
from app.models import (
    Bus,
    DemandSpec,
    Instance,
    PowerSystem,
    ProjectCatalog,
    Scenario,
    ScenarioSet,
    Season,
    StudyHorizon,
    ThermalPlant,
    TimeStructure,
    TypicalDay,
)

ALL_MONTHS = list(range(1, 13))


def one_day_structure(weight: float = 365.0, discount: float = 0.0) -> TimeStructure:
    """One season, one typical day standing for the whole year"""
    return TimeStructure(
        seasons=[Season(name="year", months=ALL_MONTHS, typical_days=[TypicalDay(name="day", weight=weight)])],
        season_discount_rate=discount,
    )


def two_season_structure(discount: float = 0.0) -> TimeStructure:
    """Jan-Jun (181 days) and Jul-Dec (184 days), one typical day each"""
    return TimeStructure(
        seasons=[
            Season(name="first", months=[1, 2, 3, 4, 5, 6], typical_days=[TypicalDay(name="day", weight=181.0)]),
            Season(name="second", months=[7, 8, 9, 10, 11, 12], typical_days=[TypicalDay(name="day", weight=184.0)]),
        ],
        season_discount_rate=discount,
    )


def single_scenario(**series) -> ScenarioSet:
    return ScenarioSet(scenarios=[Scenario(id="s1", probability=1.0)], **series)


def make_instance(system: PowerSystem, catalog: ProjectCatalog = None, scenarios: ScenarioSet = None,
                  structure: TimeStructure = None, horizon: StudyHorizon = None, name: str = "toy") -> Instance:
    return Instance(
        name=name,
        system=system,
        catalog=catalog or ProjectCatalog(),
        time_structure=structure or one_day_structure(),
        scenarios=scenarios or single_scenario(),
        horizon=horizon or StudyHorizon(),
    )


def thermal_system(load: float = 50.0, deficit_cost: float = 1000.0, **plant) -> PowerSystem:
    """One bus, one thermal plant 'G' and a flat demand"""
    defaults = dict(id="G", bus_id="n1", g_max=100.0, op_cost=10.0)
    defaults.update(plant)
    return PowerSystem(
        buses=[Bus(id="n1")],
        thermals=[ThermalPlant(**defaults)],
        demands=[DemandSpec(bus_id="n1", inelastic=load, deficit_cost=deficit_cost)],
    )


@pytest.fixture(autouse=True)
def _quiet_settings(tmp_path, monkeypatch):
    """Keep log files out of the working tree"""
    monkeypatch.setattr(settings, "LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(settings, "LOG_FILE", None)

