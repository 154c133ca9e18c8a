"""
Plan Repository
Writes and reads expansion plans, yearly cost tables and dispatch tables
"""
import json
import logging
from pathlib import Path
from typing import Dict, Iterable, Mapping, Union

import pandas as pd
from pydantic import ValidationError

from app.core.exceptions import InstanceError
from app.models.plan import COST_COLUMNS, ExpansionPlan

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
PLAN_FILE = "plan.json"
COSTS_FILE = "costs.csv"
DISPATCH_FILE = "dispatch.csv"

SUMMARY_COLUMNS = ["discount_factor", "present_value", "status", "gap",
                   "deficit_energy", "reserve_violation", "curtailment"]


class PlanRepository:
    """Repository for planning outputs in an output directory"""

    def __init__(self, output_dir: Union[str, Path]):
        self.output_dir = Path(output_dir)

    def _path(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def save_plan(self, plan: ExpansionPlan) -> Path:
        path = self._path(PLAN_FILE)
        path.write_text(plan.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote plan to {path}")
        return path

    def save_costs(self, plan: ExpansionPlan) -> Path:
        rows = []
        for summary in plan.years:
            row = {"year": summary.year, **summary.costs.as_row()}
            row.update({
                "discount_factor": summary.discount_factor,
                "present_value": summary.present_value,
                "status": summary.status,
                "gap": summary.gap,
                "deficit_energy": summary.deficit_energy,
                "reserve_violation": summary.reserve_violation,
                "curtailment": summary.curtailment,
            })
            rows.append(row)
        frame = pd.DataFrame(rows, columns=["year"] + COST_COLUMNS + SUMMARY_COLUMNS)
        path = self._path(COSTS_FILE)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Wrote {len(frame)} yearly cost row(s) to {path}")
        return path

    def save_dispatch(self, frames: Iterable[pd.DataFrame]) -> Path:
        frames = list(frames)
        frame = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame()
        path = self._path(DISPATCH_FILE)
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Wrote {len(frame)} dispatch row(s) to {path}")
        return path

    def save_index(self, model_name: str, index: Mapping[str, Mapping[str, int]]) -> Path:
        """Variable index dump: family -> {column name: column position}"""
        path = self._path(f"{model_name}_index.json")
        path.write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote variable index of '{model_name}' to {path}")
        return path

    def save_all(self, plan: ExpansionPlan, dispatch: Iterable[pd.DataFrame]) -> Dict[str, Path]:
        return {
            "plan": self.save_plan(plan),
            "costs": self.save_costs(plan),
            "dispatch": self.save_dispatch(dispatch),
        }

    @staticmethod
    def load_plan(path: Union[str, Path]) -> ExpansionPlan:
        path = Path(path)
        text = path.read_text(encoding="utf-8")
        try:
            return ExpansionPlan.model_validate_json(text)
        except ValidationError as e:
            first = e.errors()[0]
            raise InstanceError(first["msg"], source=str(path),
                                field=".".join(str(part) for part in first["loc"])) from e
