"""
activate: star-network activation pipeline for sigma_n(p)^(x)k
"""
import argparse
from typing import List

from ...core.exceptions import CertificateError
from ...core.logging import get_logger
from ...services.activation import ANCHORS, run_activation, target_state
from ..reports import CommandOutcome, activation_payload, certificate_matrices, error_info

logger = get_logger(__name__)


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "activate",
        parents=parents,
        help="Certify the star-network activation construction",
        description="p0, p_hat search, biseparable certificate and activatability of sigma_n(p)^(x)k",
    )
    parser.add_argument("--n", type=int, required=True, help="number of parties (>= 3)")
    parser.add_argument("--k", type=int, default=1, help="number of copies")
    parser.add_argument("--p", type=float, default=None, help="visibility to certify (searched when omitted)")
    parser.add_argument("--grid-points", type=int, default=None, help="p_hat grid size")
    parser.add_argument("--anchor", choices=ANCHORS, default="candidate", help="where key-state evidence is computed")
    parser.set_defaults(handler=run_activate)


def run_activate(args: argparse.Namespace) -> CommandOutcome:
    try:
        report = run_activation(args.n, args.k, p=args.p, grid_points=args.grid_points, anchor=args.anchor)
    except CertificateError as e:
        logger.error("Activation failed", stage="p_hat-search", error=str(e))
        return CommandOutcome(
            results={"n": args.n, "k": args.k},
            status="solver-error",
            error=error_info(e, stage="p_hat-search"),
        )

    outcome = CommandOutcome(
        results=activation_payload(report),
        matrices={"target": target_state(args.n, args.k, report.p).matrix, **certificate_matrices(report.certificate)},
    )
    if not report.verification.passed:
        failure = CertificateError("; ".join(report.verification.failures) or "certificate verification failed")
        outcome.status = "solver-error"
        outcome.error = error_info(failure, stage="verification")
    return outcome
