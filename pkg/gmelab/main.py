"""
GMELab - command-line entry point

    gmelab check    --state isotropic:0.5 --criterion ppt --cut "1|2"
    gmelab activate --n 3 --k 2 --emit-matrices
    gmelab sweep    --n 3 --k 1 --p-grid 0.30:0.60:0.05 --out sweep.csv
    gmelab export   --state star_pen:3,0.4 --out state.json

Exit codes: 0 success, 2 input error, 3 numerical or solver failure.
"""
import argparse
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import __version__
from .cli.commands import COMMANDS
from .cli.reports import CommandOutcome, build_report, failure_outcome
from .core.config import Tolerances, apply_tolerance_overrides, settings
from .core.exceptions import GmeLabException, NumericalError
from .core.logging import get_logger, setup_logging
from .utils.io_utils import write_json, write_matrices

logger = get_logger(__name__)

_TOL_PREFIX = "tol_"


def _common_options() -> argparse.ArgumentParser:
    """Flags shared by every sub-command"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="seed for every stochastic component")
    common.add_argument("--out", type=Path, default=None, help="output file (stdout when omitted)")
    common.add_argument(
        "--emit-matrices",
        nargs="?",
        const="",
        default=None,
        metavar="PATH",
        help="write certificate matrices to an .npz sidecar",
    )
    common.add_argument("--verbose", action="store_true", help="debug logging")
    common.add_argument("--json-logs", action="store_true", help="JSON log lines on stderr")

    tolerances = common.add_argument_group("tolerance overrides")
    for name, info in Tolerances.model_fields.items():
        tolerances.add_argument(
            f"--tol-{name.replace('_', '-')}",
            dest=f"{_TOL_PREFIX}{name}",
            type=info.annotation,
            default=None,
            metavar="VALUE",
            help=f"default {info.default}",
        )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmelab",
        description="Biseparability, GME and GME-activatability certificates for small multipartite states",
    )
    parser.add_argument("--version", action="version", version=f"gmelab {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = _common_options()
    for command in COMMANDS:
        command.register(subparsers, [common])
    return parser


def _tolerance_overrides(args: argparse.Namespace) -> Dict[str, float]:
    return {
        key[len(_TOL_PREFIX):]: value
        for key, value in vars(args).items()
        if key.startswith(_TOL_PREFIX) and value is not None
    }


def _configure(args: argparse.Namespace) -> None:
    setup_logging(
        level="DEBUG" if args.verbose or settings.debug else "INFO",
        json_format=args.json_logs or settings.log_json,
    )
    if args.seed is not None:
        settings.seed = args.seed
    overrides = _tolerance_overrides(args)
    if overrides:
        apply_tolerance_overrides(overrides)
        logger.info("Tolerance overrides applied", **overrides)


def _sidecar_path(args: argparse.Namespace) -> Path:
    if args.emit_matrices:
        return Path(args.emit_matrices)
    if args.out is not None:
        return args.out.with_suffix(".npz")
    return Path(f"gmelab-{args.command}.npz")


def _write_outputs(args: argparse.Namespace, command: List[str], started: float, outcome: CommandOutcome) -> None:
    if args.emit_matrices is not None and outcome.matrices:
        path = write_matrices(outcome.matrices, _sidecar_path(args))
        outcome.results["matrices"] = str(path)
        logger.info("Matrices written", path=str(path), count=len(outcome.matrices))

    if outcome.bare and outcome.status == "ok":
        write_json(outcome.results, args.out)
        return
    if not outcome.write_report:
        return
    report = build_report(command, started, outcome)
    write_json(report, outcome.report_path or args.out)


def run(args: argparse.Namespace, command: List[str]) -> int:
    """Run a parsed command and write its report; returns the exit code"""
    started = time.perf_counter()
    try:
        _configure(args)
        outcome = args.handler(args)
    except GmeLabException as e:
        logger.error("Command failed", command=args.command, error_type=type(e).__name__, error=str(e))
        outcome = failure_outcome(e, stage=args.command)
    except (np.linalg.LinAlgError, FloatingPointError) as e:
        logger.error("Numerical breakdown", command=args.command, error=str(e))
        outcome = failure_outcome(NumericalError(str(e)), stage=args.command)

    # error reports always go to the --out target
    if outcome.error is not None:
        outcome.bare = False
        outcome.write_report = True
    _write_outputs(args, command, started, outcome)
    logger.info("Command finished", command=args.command, status=outcome.status, exit_code=outcome.exit_code)
    return outcome.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    return run(args, argv)


if __name__ == "__main__":
    sys.exit(main())
