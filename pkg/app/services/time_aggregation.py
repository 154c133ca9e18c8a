"""
Time Aggregation Service
Seasons and typical days: duration weights, discount coefficients and typical-day selection
"""
import calendar
import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sklearn.metrics import pairwise_distances
from sklearn.preprocessing import MinMaxScaler

from app.core.config import settings
from app.core.exceptions import TimeAggregationError
from app.models.profiles import HOURS_PER_DAY
from app.models.scenarios import ScenarioSet
from app.models.time_structure import NON_LEAP_YEAR, Season, TimeStructure, TypicalDay

logger = logging.getLogger(__name__)

LEAP_DAY = "02-29"
DayTarget = Union[str, Sequence[str]]


def day_key(day: date) -> str:
    return day.strftime("%m-%d")


def calendar_days(year: Optional[int] = None) -> List[date]:
    """Every date of ``year`` (a 365-day year when None)"""
    year = NON_LEAP_YEAR if year is None else year
    first = date(year, 1, 1)
    count = 366 if calendar.isleap(year) else 365
    return [first + timedelta(days=offset) for offset in range(count)]


def seasonal_discount_rate(annual_rate: float, num_seasons: int) -> float:
    """rt with (1 + rt) = (1 + r_a)^(1/T)"""
    if num_seasons < 1:
        raise TimeAggregationError("at least one season is required")
    return (1.0 + annual_rate) ** (1.0 / num_seasons) - 1.0


def _season_order(month_to_season: Mapping[int, str], season_order: Optional[Sequence[str]]) -> List[str]:
    if season_order is not None:
        order = list(season_order)
        unknown = set(month_to_season.values()) - set(order)
        if unknown:
            raise TimeAggregationError(f"season_order misses seasons {sorted(unknown)}")
        return order
    order: List[str] = []
    for month in range(1, 13):
        name = month_to_season[month]
        if name not in order:
            order.append(name)
    return order


def build_time_structure(month_to_season: Mapping[int, str], day_assignment: Mapping[str, DayTarget],
                         season_discount_rate: float = 0.0, year: Optional[int] = None,
                         season_order: Optional[Sequence[str]] = None) -> TimeStructure:
    """Time structure whose weights D_{t,d} count the calendar days assigned to each typical day.

    ``day_assignment`` maps ``"MM-DD"`` to a typical-day name (its season follows
    the month) or to a ``(season, typical_day)`` pair. Feb-29 always follows Feb-28.
    """
    month_to_season = {int(month): str(name) for month, name in month_to_season.items()}
    missing_months = [month for month in range(1, 13) if month not in month_to_season]
    if missing_months:
        raise TimeAggregationError(f"months {missing_months} are not mapped to a season")
    seasons = _season_order(month_to_season, season_order)

    typical_days: Dict[str, List[str]] = {name: [] for name in seasons}
    counts: Dict[Tuple[str, str], int] = {}
    assignment: Dict[str, Tuple[str, str]] = {}
    for day in calendar_days(year):
        key = day_key(day)
        lookup = "02-28" if key == LEAP_DAY else key
        if lookup not in day_assignment:
            raise TimeAggregationError(f"calendar day {lookup} is not assigned to a typical day")
        target = day_assignment[lookup]
        season = month_to_season[day.month]
        if isinstance(target, str):
            typical = target
        else:
            target_season, typical = str(target[0]), str(target[1])
            if target_season != season:
                raise TimeAggregationError(f"day {key} belongs to season '{season}' but is assigned to a typical "
                                           f"day of season '{target_season}'")
        if typical not in typical_days[season]:
            typical_days[season].append(typical)
        counts[(season, typical)] = counts.get((season, typical), 0) + 1
        assignment[key] = (season, typical)

    season_models = []
    index: Dict[Tuple[str, str], Tuple[int, int]] = {}
    for t, name in enumerate(seasons, start=1):
        months = [month for month in range(1, 13) if month_to_season[month] == name]
        days = []
        for d, typical in enumerate(typical_days[name], start=1):
            days.append(TypicalDay(name=typical, weight=float(counts[(name, typical)])))
            index[(name, typical)] = (t, d)
        if not days:
            raise TimeAggregationError(f"season '{name}' has no days")
        season_models.append(Season(name=name, months=months, typical_days=days))

    structure = TimeStructure(
        seasons=season_models,
        day_assignment={key: index[value] for key, value in assignment.items()},
        season_discount_rate=season_discount_rate,
        calendar_year=year,
    )
    logger.debug(f"Built time structure with {structure.num_seasons} season(s), "
                 f"{structure.num_typical_days} typical day(s), {structure.total_weight:g} days")
    return structure


def weekday_weekend_assignment(month_to_season: Mapping[int, str], year: Optional[int] = None) -> Dict[str, str]:
    """Day assignment with a 'weekday' and a 'weekend' typical day in every season"""
    assignment = {}
    for day in calendar_days(year):
        if day_key(day) == LEAP_DAY:
            continue
        assignment[day_key(day)] = "weekend" if day.weekday() >= 5 else "weekday"
    return assignment


def beta(t: int, d: int, scenario_id: str, structure: TimeStructure, scenarios: ScenarioSet) -> float:
    """p_s * D_{t,d} / (1 + rt)^(t-1)"""
    return scenarios.probability(scenario_id) * structure.weight(t, d) * structure.season_discount(t)


# --------------------------------------------------------------------------- typical-day selection

@dataclass
class TypicalDaySelection:
    """Result of the k-medoids typical-day search"""
    assignment: Dict[str, Tuple[str, str]]
    medoids: Dict[Tuple[str, str], str]           # (season, typical day) -> medoid "MM-DD"
    weights: Dict[Tuple[str, str], int]
    season_errors: Dict[str, float] = field(default_factory=dict)

    @property
    def error(self) -> float:
        return float(sum(self.season_errors.values()))

    def to_fragment(self) -> Dict:
        """JSON fragment ready to paste into an instance's time structure"""
        return {
            "day_assignment": {key: list(value) for key, value in sorted(self.assignment.items())},
            "typical_days": [
                {"season": season, "name": name, "weight": weight, "medoid": self.medoids[(season, name)]}
                for (season, name), weight in self.weights.items()
            ],
            "aggregation_error": self.error,
        }


def _daily_frame(profiles: pd.DataFrame) -> pd.DataFrame:
    """Index the frame by date and keep exactly 24 hourly columns"""
    frame = profiles.copy()
    if "date" in frame.columns:
        frame = frame.set_index("date")
    frame.index = pd.to_datetime(frame.index)
    numeric = frame.select_dtypes(include=[np.number])
    if numeric.shape[1] != HOURS_PER_DAY:
        raise TimeAggregationError(f"daily profiles need {HOURS_PER_DAY} hourly columns, got {numeric.shape[1]}")
    numeric = numeric[numeric.index.strftime("%m-%d") != LEAP_DAY]
    if numeric.index.strftime("%m-%d").duplicated().any():
        raise TimeAggregationError("daily profiles must cover a single year (duplicate calendar days found)")
    return numeric.sort_index()


def _normalize(values: np.ndarray) -> np.ndarray:
    """Min-max scaling over the whole season matrix, keeping the daily shape"""
    scaler = MinMaxScaler()
    return scaler.fit_transform(values.reshape(-1, 1)).reshape(values.shape)


def _assign(distances: np.ndarray, medoids: List[int]) -> np.ndarray:
    return np.argmin(distances[:, medoids], axis=1)


def _cost(distances: np.ndarray, medoids: List[int]) -> float:
    return float(distances[:, medoids].min(axis=1).sum())


def _refine(distances: np.ndarray, medoids: List[int], rank: np.ndarray, max_rounds: int = 100) -> List[int]:
    """Voronoi iteration: move each medoid to the member minimising in-cluster distance"""
    medoids = list(medoids)
    for _ in range(max_rounds):
        labels = _assign(distances, medoids)
        changed = False
        for cluster, medoid in enumerate(medoids):
            members = np.flatnonzero(labels == cluster)
            if members.size == 0:
                continue
            within = distances[np.ix_(members, members)].sum(axis=0)
            best_value = within.min()
            ties = members[within <= best_value + 1e-12]
            best = int(ties[np.argmin(rank[ties])])
            current = distances[members, medoid].sum()
            if best != medoid and best_value < current - 1e-12:
                medoids[cluster] = best
                changed = True
        if not changed:
            break
    return medoids


def k_medoids(distances: np.ndarray, k: int, seed: Optional[int] = None) -> Tuple[List[int], float]:
    """Greedy-add then refine, one medoid at a time; the cost never grows with k"""
    n = distances.shape[0]
    order = np.random.default_rng(seed).permutation(n) if seed is not None else np.arange(n)
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    medoids: List[int] = []
    for _ in range(k):
        nearest = distances[:, medoids].min(axis=1) if medoids else np.full(n, np.inf)
        candidates = np.array([index for index in order if index not in medoids])
        costs = np.minimum(nearest[:, None], distances[:, candidates]).sum(axis=0)
        medoids.append(int(candidates[int(np.argmin(costs))]))
        medoids = _refine(distances, medoids, rank)
    return medoids, _cost(distances, medoids)


def suggest_typical_days(profiles: pd.DataFrame, month_to_season: Mapping[int, str], k: int,
                         seed: Optional[int] = None, renewables: Optional[pd.DataFrame] = None) -> TypicalDaySelection:
    """Pick ``k`` typical days per season by k-medoids on normalised daily net-demand profiles.

    ``profiles`` holds one row per calendar day with 24 hourly columns; when
    ``renewables`` is given (same layout) it is subtracted first.
    """
    if k < 1:
        raise TimeAggregationError("k must be at least 1")
    seed = settings.CLUSTERING_SEED if seed is None else seed
    month_to_season = {int(month): str(name) for month, name in month_to_season.items()}
    net = _daily_frame(profiles)
    if renewables is not None:
        net = net - _daily_frame(renewables).reindex(net.index).fillna(0.0).values

    assignment: Dict[str, Tuple[str, str]] = {}
    medoid_days: Dict[Tuple[str, str], str] = {}
    weights: Dict[Tuple[str, str], int] = {}
    errors: Dict[str, float] = {}
    for season in _season_order(month_to_season, None):
        block = net[[month_to_season[ts.month] == season for ts in net.index]]
        if len(block) == 0:
            raise TimeAggregationError(f"no daily profiles fall in season '{season}'")
        if k > len(block):
            raise TimeAggregationError(f"k = {k} exceeds the {len(block)} days of season '{season}'")
        distances = pairwise_distances(_normalize(block.values), metric="euclidean")
        medoids, error = k_medoids(distances, k, seed)
        labels = _assign(distances, medoids)

        # Typical days are numbered by the first calendar day they cover
        first_seen: List[int] = []
        for label in labels:
            if label not in first_seen:
                first_seen.append(int(label))
        keys = block.index.strftime("%m-%d").tolist()
        for position, cluster in enumerate(first_seen, start=1):
            name = f"day{position}"
            members = [keys[i] for i in np.flatnonzero(labels == cluster)]
            for key in members:
                assignment[key] = (season, name)
            medoid_days[(season, name)] = keys[medoids[cluster]]
            weights[(season, name)] = len(members)
        errors[season] = error
        logger.debug(f"Season '{season}': {k} typical day(s), aggregation error {error:.6g}")

    return TypicalDaySelection(assignment=assignment, medoids=medoid_days, weights=weights, season_errors=errors)


def medoid_profiles(selection: TypicalDaySelection, profiles: pd.DataFrame) -> pd.DataFrame:
    """Hourly profile of each typical day's medoid, indexed by (season, typical_day)"""
    frame = _daily_frame(profiles)
    by_key = {ts.strftime("%m-%d"): row for ts, row in zip(frame.index, frame.values)}
    rows = {key: by_key[medoid] for key, medoid in selection.medoids.items()}
    result = pd.DataFrame.from_dict(rows, orient="index", columns=[f"h{h}" for h in range(1, HOURS_PER_DAY + 1)])
    result.index = pd.MultiIndex.from_tuples(result.index, names=["season", "typical_day"])
    return result
