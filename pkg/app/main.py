"""
Command Line Application
Entry point for the expansion planner: validate, plan, dispatch, export and suggest-days
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from app.commands import COMMANDS
from app.core.config import settings
from app.core.exceptions import (
    ConfigurationError,
    InstanceError,
    ModelBuildError,
    PlannerError,
    PlanningError,
    SolverError,
    TimeAggregationError,
    ValidationFailed,
)
from app.core.logging import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_SOLVE = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="expansion-planner", description=f"{settings.APP_NAME} {settings.VERSION}")
    parser.add_argument("--log-level", default=None, help=f"logging level (default: {settings.LOG_LEVEL})")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def exit_code(error: BaseException) -> int:
    """Exit code for an exception escaping a command"""
    if isinstance(error, (ValidationFailed, InstanceError, TimeAggregationError, ValidationError)):
        return EXIT_VALIDATION
    if isinstance(error, (PlanningError, SolverError, ModelBuildError, ConfigurationError)):
        return EXIT_SOLVE
    if isinstance(error, OSError):
        return EXIT_IO
    if isinstance(error, PlannerError):
        return EXIT_SOLVE
    raise error


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.handler(args)
    except ValidationFailed as e:
        for line in e.report.lines():
            print(line, file=sys.stderr)
        logger.error(str(e))
        return exit_code(e)
    except (PlannerError, ValidationError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code(e)
