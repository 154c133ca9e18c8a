"""
validate: check an instance and print every finding
"""
import argparse
import logging
from pathlib import Path

from app.repositories.instance_repository import InstanceRepository
from app.services.validation import validate_instance

logger = logging.getLogger(__name__)


def register(subparsers):
    parser = subparsers.add_parser("validate", help="check an instance file for consistency")
    parser.add_argument("instance", type=Path, help="instance JSON file")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    instance = InstanceRepository().load(args.instance)
    report = validate_instance(instance)
    for line in report.lines():
        print(line)
    if report.is_clean:
        print(f"{instance.name}: ok ({len(report.warnings)} warning(s))")
        return 0
    logger.error(f"Instance '{instance.name}' has {len(report.findings)} error(s)")
    return 1
