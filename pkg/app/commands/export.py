"""
export: write one year's model as MPS and LP files
"""
import argparse
import logging
from pathlib import Path

from app.commands.common import add_output_argument, formulation_options, load_instance, output_dir
from app.formulation.builder import build_yearly_model, dump_index
from app.milp.lp_format import export_lp
from app.milp.mps import export_mps
from app.repositories.plan_repository import PlanRepository

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("export", help="write a yearly model in MPS and LP format")
    parser.add_argument("instance", type=Path, help="instance JSON file")
    parser.add_argument("--year", type=int, default=1, help="planning year (default: 1)")
    parser.add_argument("--plan", type=Path, default=None, help="plan.json whose earlier decisions are fixed")
    parser.add_argument("--workers", type=int, default=None, help="formulation threads")
    parser.add_argument("--dump-index", action="store_true", help="also write the variable index as JSON")
    add_output_argument(parser)
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    instance = load_instance(args.instance)
    fixed = {}
    if args.plan is not None:
        fixed = PlanRepository.load_plan(args.plan).built_by(args.year - 1)
    yearly = build_yearly_model(instance.for_year(args.year), fixed, formulation_options(args), year=args.year)

    target = output_dir(args)
    target.mkdir(parents=True, exist_ok=True)
    mps_path = target / f"{yearly.model.name}.mps"
    lp_path = target / f"{yearly.model.name}.lp"
    mps_path.write_text(export_mps(yearly.model), encoding="utf-8")
    lp_path.write_text(export_lp(yearly.model), encoding="utf-8")
    logger.info(f"Exported '{yearly.model.name}' to {mps_path} and {lp_path}")
    print(f"{mps_path}\n{lp_path}")
    if args.dump_index:
        print(PlanRepository(target).save_index(yearly.model.name, dump_index(yearly)))
    return 0
