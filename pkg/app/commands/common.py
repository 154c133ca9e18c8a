"""
Shared command options and helpers
"""
import argparse
import logging
from pathlib import Path
from typing import Any, Dict

from app.core.config import settings
from app.core.exceptions import ValidationFailed
from app.formulation.context import FormulationOptions
from app.models.instance import Instance
from app.repositories.instance_repository import InstanceRepository
from app.services.validation import validate_instance
from app.solver.backend import BACKENDS
from app.solver.config import SolveConfig

logger = logging.getLogger(__name__)


def add_solver_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("solver")
    group.add_argument("--backend", choices=BACKENDS, default=None,
                       help=f"solver backend (default: {settings.SOLVER_BACKEND})")
    group.add_argument("--mip-gap", type=float, default=None, help=f"relative MIP gap (default: {settings.MIP_GAP})")
    group.add_argument("--time-limit", type=float, default=None,
                       help=f"time limit per solve in seconds (default: {settings.TIME_LIMIT_SECONDS})")
    group.add_argument("--node-limit", type=int, default=None,
                       help=f"branch-and-bound node limit (default: {settings.NODE_LIMIT})")
    group.add_argument("--workers", type=int, default=None,
                       help=f"formulation threads (default: {settings.FORMULATION_WORKERS})")


def add_output_argument(parser: argparse.ArgumentParser):
    parser.add_argument("-o", "--output", type=Path, default=None,
                        help=f"output directory (default: {settings.OUTPUT_DIR})")


def output_dir(args: argparse.Namespace) -> Path:
    return args.output if args.output is not None else Path(settings.OUTPUT_DIR)


def solve_config(args: argparse.Namespace) -> SolveConfig:
    overrides: Dict[str, Any] = {}
    if getattr(args, "mip_gap", None) is not None:
        overrides["mip_gap"] = args.mip_gap
    if getattr(args, "time_limit", None) is not None:
        overrides["time_limit"] = args.time_limit
    if getattr(args, "node_limit", None) is not None:
        overrides["node_limit"] = args.node_limit
    return SolveConfig(**overrides)


def formulation_options(args: argparse.Namespace) -> FormulationOptions:
    if getattr(args, "workers", None) is not None:
        return FormulationOptions(workers=args.workers)
    return FormulationOptions()


def load_instance(path: Path, validate: bool = True) -> Instance:
    """Load an instance and refuse it when validation reports errors"""
    instance = InstanceRepository().load(path)
    if validate:
        report = validate_instance(instance)
        for warning in report.warnings:
            logger.warning(str(warning))
        if not report.is_clean:
            raise ValidationFailed(report)
    return instance
