"""
Time Structure
Seasons, typical days and their duration weights
"""
from typing import Dict, Iterator, List, Optional, Tuple

from pydantic import Field

from app.models.profiles import HOURS_PER_DAY
from app.models.system import FrozenModel

NON_LEAP_YEAR = 2001


class TypicalDay(FrozenModel):
    name: str
    weight: float  # D_{t,d}: calendar days represented


class Season(FrozenModel):
    name: str
    months: List[int]
    typical_days: List[TypicalDay]


class TimeStructure(FrozenModel):
    """Ordered seasons t = 1..T, each with typical days d = 1..|D_t| of 24 hours.

    ``day_assignment`` maps ``"MM-DD"`` to the 1-based ``(season, typical_day)`` pair.
    """

    seasons: List[Season]
    day_assignment: Dict[str, Tuple[int, int]] = Field(default_factory=dict)
    season_discount_rate: float = 0.0
    calendar_year: Optional[int] = None  # None: a 365-day year

    @property
    def num_seasons(self) -> int:
        return len(self.seasons)

    @property
    def hours(self) -> range:
        return range(1, HOURS_PER_DAY + 1)

    def season(self, t: int) -> Season:
        return self.seasons[t - 1]

    def weight(self, t: int, d: int) -> float:
        return self.seasons[t - 1].typical_days[d - 1].weight

    def days(self) -> Iterator[Tuple[int, int]]:
        """All (season, typical_day) pairs in order"""
        for t, season in enumerate(self.seasons, start=1):
            for d in range(1, len(season.typical_days) + 1):
                yield t, d

    def periods(self) -> Iterator[Tuple[int, int, int]]:
        """All (season, typical_day, hour) triples in order"""
        for t, d in self.days():
            for h in self.hours:
                yield t, d, h

    @property
    def num_typical_days(self) -> int:
        return sum(len(season.typical_days) for season in self.seasons)

    @property
    def total_weight(self) -> float:
        return sum(self.weight(t, d) for t, d in self.days())

    def season_discount(self, t: int) -> float:
        """1 / (1 + rt)^(t-1)"""
        return 1.0 / (1.0 + self.season_discount_rate) ** (t - 1)
