"""
Instance Repository
Reads planning instances from JSON files with optional CSV sidecars
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd
from pydantic import ValidationError

from app.core.exceptions import InstanceError
from app.models.instance import Instance
from app.models.time_structure import TimeStructure
from app.services.time_aggregation import (
    build_time_structure,
    seasonal_discount_rate,
    weekday_weekend_assignment,
)

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ("season", "typical_day", "hour", "scenario")


class InstanceRepository:
    """Repository for planning instance files"""

    def load(self, path: Union[str, Path]) -> Instance:
        """Parse an instance file; missing files raise OSError, bad content InstanceError"""
        path = Path(path)
        logger.info(f"Loading instance from {path}")
        text = path.read_text(encoding="utf-8")
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceError(f"invalid JSON: {e.msg} at line {e.lineno}, column {e.colno}",
                                source=str(path)) from e
        if not isinstance(raw, dict):
            raise InstanceError("top-level value must be an object", source=str(path))
        return self.from_dict(raw, base_dir=path.parent, source=str(path))

    def from_dict(self, raw: Dict[str, Any], base_dir: Optional[Path] = None,
                  source: Optional[str] = None) -> Instance:
        base_dir = base_dir or Path(".")
        data = self._resolve_sidecars(raw, base_dir, source, "")
        data["time_structure"] = self._time_structure(data, source)
        try:
            instance = Instance.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"])
            raise InstanceError(first["msg"], source=source, field=location) from e
        logger.info(f"Loaded instance '{instance.name}': {instance.system!r}, "
                    f"{len(instance.catalog.projects)} project(s), {len(instance.scenarios.scenarios)} scenario(s)")
        return instance

    # ------------------------------------------------------------------ sidecars

    def _resolve_sidecars(self, node: Any, base_dir: Path, source: Optional[str], where: str) -> Any:
        if isinstance(node, dict):
            if "csv" in node and set(node) <= {"csv", "column"}:
                return self._read_sidecar(node, base_dir, source, where)
            return {key: self._resolve_sidecars(value, base_dir, source, f"{where}.{key}".lstrip("."))
                    for key, value in node.items()}
        if isinstance(node, list):
            return [self._resolve_sidecars(item, base_dir, source, f"{where}[{i}]") for i, item in enumerate(node)]
        return node

    def _read_sidecar(self, reference: Dict[str, Any], base_dir: Path, source: Optional[str],
                      where: str) -> Dict[str, Any]:
        """CSV columns season[, typical_day, hour][, scenario] plus the value column -> records"""
        csv_path = base_dir / reference["csv"]
        column = reference.get("column", "value")
        frame = pd.read_csv(csv_path)
        if column not in frame.columns:
            raise InstanceError(f"column '{column}' not found in {csv_path}", source=source, field=where)
        keys = [name for name in RECORD_COLUMNS if name in frame.columns]
        if "season" not in keys:
            raise InstanceError(f"{csv_path} has no 'season' column", source=source, field=where)
        records = []
        for row in frame[keys + [column]].itertuples(index=False):
            record = {name: getattr(row, name) for name in keys}
            for name in ("season", "typical_day", "hour"):
                if name in record:
                    record[name] = int(record[name])
            if "scenario" in record:
                record["scenario"] = None if pd.isna(record["scenario"]) else str(record["scenario"])
            record["value"] = float(getattr(row, column))
            records.append(record)
        logger.debug(f"Read {len(records)} record(s) for {where} from {csv_path}")
        return {"records": records}

    # ------------------------------------------------------------------ time structure

    def _time_structure(self, data: Dict[str, Any], source: Optional[str]) -> TimeStructure:
        section = data.get("time_structure")
        if not isinstance(section, dict):
            raise InstanceError("time_structure is required", source=source, field="time_structure")
        section = dict(section)
        annual_rate = float(data.get("horizon", {}).get("annual_discount_rate", 0.0))

        if "month_to_season" not in section:
            try:
                structure = TimeStructure.model_validate(section)
            except ValidationError as e:
                first = e.errors()[0]
                location = ".".join(["time_structure"] + [str(part) for part in first["loc"]])
                raise InstanceError(first["msg"], source=source, field=location) from e
            if "season_discount_rate" not in section:
                rate = seasonal_discount_rate(annual_rate, structure.num_seasons)
                structure = structure.model_copy(update={"season_discount_rate": rate})
            return structure

        month_to_season = {int(month): name for month, name in section["month_to_season"].items()}
        year = section.get("calendar_year")
        if section.get("weekday_weekend"):
            assignment = weekday_weekend_assignment(month_to_season, year)
        elif "day_assignment" in section:
            assignment = section["day_assignment"]
        else:
            raise InstanceError("day_assignment (or weekday_weekend) is required with month_to_season",
                                source=source, field="time_structure.day_assignment")
        season_order = section.get("season_order")
        num_seasons = len(season_order) if season_order else len(set(month_to_season.values()))
        rate = section.get("season_discount_rate")
        if rate is None:
            rate = seasonal_discount_rate(annual_rate, num_seasons)
        return build_time_structure(month_to_season, assignment, float(rate), year, season_order)
