"""
Seasons, typical days and typical-day selection
"""
import numpy as np
import pandas as pd
import pytest

from app.core.exceptions import TimeAggregationError
from app.services.time_aggregation import (
    beta,
    build_time_structure,
    k_medoids,
    medoid_profiles,
    seasonal_discount_rate,
    suggest_typical_days,
    weekday_weekend_assignment,
)
from app.models import Scenario, ScenarioSet
from conftest import two_season_structure

HALVES = {month: ("dry" if month <= 6 else "wet") for month in range(1, 13)}
WHOLE_YEAR = {month: "year" for month in range(1, 13)}


def daily_profiles(year: int = 2001, seed: int = 0) -> pd.DataFrame:
    """Synthetic daily load shapes: a weekday bump, a seasonal level and noise"""
    rng = np.random.default_rng(seed)
    dates = pd.date_range(f"{year}-01-01", f"{year}-12-31", freq="D")
    hours = np.arange(24)
    rows = []
    for day in dates:
        level = 100.0 + 20.0 * np.cos(2 * np.pi * day.dayofyear / 365.0)
        shape = 10.0 * np.sin(np.pi * hours / 23.0) * (1.0 if day.weekday() < 5 else 0.4)
        rows.append(level + shape + rng.normal(0.0, 1.0, size=24))
    return pd.DataFrame(rows, index=dates, columns=[f"h{h}" for h in range(1, 25)])


def test_weekday_weekend_weights_partition_the_year():
    structure = build_time_structure(WHOLE_YEAR, weekday_weekend_assignment(WHOLE_YEAR))
    season = structure.season(1)
    assert [day.name for day in season.typical_days] == ["weekday", "weekend"]
    assert [day.weight for day in season.typical_days] == [261.0, 104.0]
    assert structure.total_weight == 365.0
    assert len(structure.day_assignment) == 365


def test_leap_day_follows_february_28():
    assignment = weekday_weekend_assignment(HALVES, 2024)
    assert "02-29" not in assignment
    structure = build_time_structure(HALVES, assignment, year=2024)
    assert structure.total_weight == 366.0
    assert structure.day_assignment["02-29"] == structure.day_assignment["02-28"]
    assert sum(day.weight for day in structure.season(1).typical_days) == 182.0


def test_incomplete_mappings_are_rejected():
    with pytest.raises(TimeAggregationError):
        build_time_structure({month: "year" for month in range(1, 12)}, weekday_weekend_assignment(WHOLE_YEAR))
    partial = weekday_weekend_assignment(WHOLE_YEAR)
    del partial["07-04"]
    with pytest.raises(TimeAggregationError):
        build_time_structure(WHOLE_YEAR, partial)
    crossing = {key: ("dry", "day") for key in weekday_weekend_assignment(HALVES)}
    with pytest.raises(TimeAggregationError):
        build_time_structure(HALVES, crossing)


def test_seasonal_rate_compounds_to_the_annual_rate():
    rate = seasonal_discount_rate(0.1, 4)
    assert (1.0 + rate) ** 4 == pytest.approx(1.1)
    assert seasonal_discount_rate(0.0, 3) == 0.0
    with pytest.raises(TimeAggregationError):
        seasonal_discount_rate(0.1, 0)


def test_beta_combines_probability_weight_and_discount():
    structure = two_season_structure(discount=0.05)
    scenarios = ScenarioSet(scenarios=[Scenario(id="low", probability=0.25), Scenario(id="high", probability=0.75)])
    assert beta(1, 1, "low", structure, scenarios) == pytest.approx(0.25 * 181.0)
    assert beta(2, 1, "high", structure, scenarios) == pytest.approx(0.75 * 184.0 / 1.05)


def test_typical_days_cover_each_season():
    profiles = daily_profiles()
    selection = suggest_typical_days(profiles, HALVES, k=3, seed=1)

    assert len(selection.assignment) == 365
    assert sum(weight for (season, _), weight in selection.weights.items() if season == "dry") == 181
    assert sum(weight for (season, _), weight in selection.weights.items() if season == "wet") == 184
    for (season, _), medoid in selection.medoids.items():
        assert selection.assignment[medoid][0] == season

    fragment = selection.to_fragment()
    assert len(fragment["typical_days"]) == 6
    assert fragment["aggregation_error"] == pytest.approx(selection.error)

    shapes = medoid_profiles(selection, profiles)
    assert shapes.shape == (6, 24)


def test_aggregation_error_never_grows_with_k():
    profiles = daily_profiles(seed=4)
    errors = [suggest_typical_days(profiles, WHOLE_YEAR, k=k, seed=0).error for k in range(1, 6)]
    assert all(later <= earlier + 1e-9 for earlier, later in zip(errors, errors[1:]))


def test_k_medoids_is_deterministic_for_a_seed():
    rng = np.random.default_rng(2)
    points = rng.normal(size=(30, 2))
    distances = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    first = k_medoids(distances, 3, seed=5)
    second = k_medoids(distances, 3, seed=5)
    assert first == second
    assert len(set(first[0])) == 3


def test_leap_year_profiles_drop_february_29():
    selection = suggest_typical_days(daily_profiles(year=2024), WHOLE_YEAR, k=2)
    assert "02-29" not in selection.assignment
    assert sum(selection.weights.values()) == 365


def test_bad_profile_inputs_raise():
    profiles = daily_profiles()
    with pytest.raises(TimeAggregationError):
        suggest_typical_days(profiles.iloc[:, :23], WHOLE_YEAR, k=2)
    with pytest.raises(TimeAggregationError):
        suggest_typical_days(profiles, WHOLE_YEAR, k=0)
    with pytest.raises(TimeAggregationError):
        suggest_typical_days(profiles.iloc[:10], WHOLE_YEAR, k=20)
