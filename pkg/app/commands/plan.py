"""
plan: run the rolling-horizon expansion plan and write plan, cost and dispatch files
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
from app.repositories.plan_repository import PlanRepository
from app.services.planner import RollingHorizonPlanner
from app.services.reporting import dispatch_frame

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("plan", help="compute the expansion plan over the study horizon")
    parser.add_argument("instance", type=Path, help="instance JSON file")
    parser.add_argument("--export-models", action="store_true",
                        help="also write each yearly model as MPS into <output>/models")
    add_output_argument(parser)
    add_solver_arguments(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    target = output_dir(args)
    planner = RollingHorizonPlanner(
        instance,
        config=solve_config(args),
        backend=args.backend,
        options=formulation_options(args),
        export_dir=target / "models" if args.export_models else None,
    )
    plan = planner.run()

    frames = [dispatch_frame(result.yearly, result.solution, result.year) for result in planner.results]
    paths = PlanRepository(target).save_all(plan, frames)

    for summary in plan.years:
        built = ", ".join(summary.new_projects) or "-"
        print(f"year {summary.year}: total {summary.costs.total:.6g} ({summary.status}), new: {built}")
    print(f"present value {plan.total_present_value:.6g}; files in {paths['plan'].parent}")
    return 0
