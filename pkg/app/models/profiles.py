"""
Profile Series
Hourly (season, typical day, hour, scenario) and seasonal (season, scenario) data series
"""
from typing import Any, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

HOURS_PER_DAY = 24

HourKey = Tuple[int, int, int, str]
SeasonKey = Tuple[int, str]


def _record_value(record: Dict[str, Any]) -> float:
    for key in ("value", "mw", "hm3"):
        if key in record:
            return float(record[key])
    raise ValueError(f"record {record} has no 'value' field")


class HourlySeries(BaseModel):
    """Value per (season, typical_day, hour, scenario).

    Lookup order: explicit record, then the 24-hour pattern, then the default.
    Accepted inputs are a scalar, a list of 24 values, a list of records
    ``{season, typical_day, hour, scenario?, value}`` or the canonical mapping.
    Records without a scenario apply to every scenario.
    """

    model_config = ConfigDict(frozen=True)

    default: Optional[float] = None
    pattern: Optional[Tuple[float, ...]] = None
    values: Dict[HourKey, float] = {}
    any_scenario: Dict[Tuple[int, int, int], float] = {}

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return {"default": float(data)}
        if isinstance(data, (list, tuple)):
            if all(isinstance(item, (int, float)) for item in data):
                if len(data) != HOURS_PER_DAY:
                    raise ValueError(f"an hour pattern needs {HOURS_PER_DAY} values, got {len(data)}")
                return {"pattern": tuple(float(item) for item in data)}
            return cls._from_records(data, None)
        if isinstance(data, dict) and "records" in data:
            extra = {key: value for key, value in data.items() if key != "records"}
            return cls._from_records(data["records"], extra)
        return data

    @staticmethod
    def _from_records(records: Iterable[Dict[str, Any]], extra: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        values: Dict[HourKey, float] = {}
        any_scenario: Dict[Tuple[int, int, int], float] = {}
        for record in records:
            if not isinstance(record, dict):
                raise ValueError(f"unsupported hourly record {record!r}")
            key = (int(record["season"]), int(record["typical_day"]), int(record["hour"]))
            scenario = record.get("scenario")
            if scenario is None or scenario == "":
                any_scenario[key] = _record_value(record)
            else:
                values[key + (str(scenario),)] = _record_value(record)
        data: Dict[str, Any] = dict(extra or {})
        data["values"] = values
        data["any_scenario"] = any_scenario
        return data

    def get(self, season: int, typical_day: int, hour: int, scenario: str) -> Optional[float]:
        value = self.values.get((season, typical_day, hour, scenario))
        if value is None:
            value = self.any_scenario.get((season, typical_day, hour))
        if value is None and self.pattern is not None:
            value = self.pattern[hour - 1]
        if value is None:
            value = self.default
        return value

    def at(self, season: int, typical_day: int, hour: int, scenario: str) -> float:
        value = self.get(season, typical_day, hour, scenario)
        if value is None:
            raise KeyError(f"no value for season {season}, typical day {typical_day}, hour {hour}, scenario '{scenario}'")
        return value

    def scaled(self, factor: float) -> "HourlySeries":
        """Copy with every value multiplied by ``factor``"""
        return HourlySeries.model_construct(
            default=None if self.default is None else self.default * factor,
            pattern=None if self.pattern is None else tuple(v * factor for v in self.pattern),
            values={key: v * factor for key, v in self.values.items()},
            any_scenario={key: v * factor for key, v in self.any_scenario.items()},
        )

    def all_values(self) -> List[float]:
        found = list(self.values.values()) + list(self.any_scenario.values())
        if self.pattern is not None:
            found.extend(self.pattern)
        if self.default is not None:
            found.append(self.default)
        return found


class SeasonalSeries(BaseModel):
    """Value per (season, scenario); accepts a scalar, records ``{season, scenario?, value}`` or the mapping"""

    model_config = ConfigDict(frozen=True)

    default: Optional[float] = None
    values: Dict[SeasonKey, float] = {}
    any_scenario: Dict[int, float] = {}

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, (int, float)) and not isinstance(data, bool):
            return {"default": float(data)}
        records = None
        extra: Dict[str, Any] = {}
        if isinstance(data, (list, tuple)):
            records = data
        elif isinstance(data, dict) and "records" in data:
            records = data["records"]
            extra = {key: value for key, value in data.items() if key != "records"}
        if records is None:
            return data
        values: Dict[SeasonKey, float] = {}
        any_scenario: Dict[int, float] = {}
        for record in records:
            scenario = record.get("scenario")
            if scenario is None or scenario == "":
                any_scenario[int(record["season"])] = _record_value(record)
            else:
                values[(int(record["season"]), str(scenario))] = _record_value(record)
        extra.update({"values": values, "any_scenario": any_scenario})
        return extra

    def get(self, season: int, scenario: str) -> Optional[float]:
        value = self.values.get((season, scenario))
        if value is None:
            value = self.any_scenario.get(season)
        return self.default if value is None else value

    def at(self, season: int, scenario: str) -> float:
        value = self.get(season, scenario)
        if value is None:
            raise KeyError(f"no value for season {season}, scenario '{scenario}'")
        return value

    def all_values(self) -> List[float]:
        found = list(self.values.values()) + list(self.any_scenario.values())
        if self.default is not None:
            found.append(self.default)
        return found
