"""
suggest-days: pick typical days per season from a year of daily profiles
"""
import argparse
import json
import logging
from pathlib import Path

import pandas as pd

from app.core.exceptions import TimeAggregationError
from app.services.time_aggregation import suggest_typical_days

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("suggest-days", help="cluster daily profiles into typical days")
    parser.add_argument("profiles", type=Path, help="CSV with a 'date' column and 24 hourly columns")
    parser.add_argument("--seasons", required=True,
                        help="month -> season mapping, as a JSON object or a path to a JSON file")
    parser.add_argument("-k", type=int, required=True, help="typical days per season")
    parser.add_argument("--seed", type=int, default=None, help="tie-breaking seed")
    parser.add_argument("--renewables", type=Path, default=None,
                        help="CSV of renewable output (same layout) subtracted before clustering")
    parser.add_argument("-o", "--output", type=Path, default=None, help="write the JSON fragment here")
    parser.set_defaults(handler=run)


def _month_to_season(value: str) -> dict:
    text = Path(value).read_text(encoding="utf-8") if not value.lstrip().startswith("{") else value
    try:
        mapping = json.loads(text)
    except json.JSONDecodeError as e:
        raise TimeAggregationError(f"--seasons is not valid JSON: {e.msg}") from e
    return {int(month): season for month, season in mapping.items()}


def run(args: argparse.Namespace) -> int:
    profiles = pd.read_csv(args.profiles)
    renewables = pd.read_csv(args.renewables) if args.renewables is not None else None
    selection = suggest_typical_days(profiles, _month_to_season(args.seasons), args.k, args.seed, renewables)

    text = json.dumps(selection.to_fragment(), indent=2) + "\n"
    if args.output is not None:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote typical-day fragment to {args.output}")
    else:
        print(text, end="")
    return 0
