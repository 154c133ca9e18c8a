"""
dispatch: operation-only run with every investment fixed
"""
import argparse
import logging
from pathlib import Path

from app.commands.common import (
    add_output_argument,
    add_solver_arguments,
    formulation_options,
    load_instance,
    output_dir,
    solve_config,
)
from app.models.plan import ExpansionPlan
from app.repositories.plan_repository import PlanRepository
from app.services.planner import solve_operation
from app.services.reporting import dispatch_frame

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("dispatch", help="operate the system with fixed investments")
    parser.add_argument("instance", type=Path, help="instance JSON file")
    parser.add_argument("--plan", type=Path, default=None,
                        help="plan.json whose decisions are fixed (default: existing assets only)")
    parser.add_argument("--year", type=int, default=1, help="planning year to operate (default: 1)")
    add_output_argument(parser)
    add_solver_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    decisions = {}
    if args.plan is not None:
        decisions = PlanRepository.load_plan(args.plan).built_by(args.year)
        logger.info(f"Fixing {len(decisions)} decision(s) from {args.plan}")

    result = solve_operation(instance, decisions, args.year, solve_config(args), args.backend,
                             formulation_options(args))
    repository = PlanRepository(output_dir(args))
    repository.save_costs(ExpansionPlan(instance=instance.name, years=[result.summary]))
    path = repository.save_dispatch([dispatch_frame(result.yearly, result.solution, args.year)])
    print(f"year {args.year}: total {result.summary.costs.total:.6g} ({result.summary.status}); "
          f"dispatch in {path}")
    return 0
