"""
export: dense JSON form of a state spec
"""
import argparse
from typing import List

from ...core.logging import get_logger
from ..reports import CommandOutcome
from ..state_spec import build_state, parse_state_spec, state_to_dense

logger = get_logger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "export",
        parents=parents,
        help="Write the dense JSON spec of a state",
        description="Materialize a state spec and write it as a dense spec that --state @file reads back",
    )
    parser.add_argument("--state", required=True)
    parser.add_argument("--copies", type=int, default=None)
    parser.set_defaults(handler=run_export)


def run_export(args: argparse.Namespace) -> CommandOutcome:
    rho = build_state(parse_state_spec(args.state), copy_count=args.copies)
    dense = state_to_dense(rho)
    logger.info("Exported state", state=args.state, dimension=rho.dim, factors=rho.layout.size)
    return CommandOutcome(results=dense.model_dump(by_alias=True), bare=True)
