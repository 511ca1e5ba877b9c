"""
check: one criterion on one state, per cut or for the whole state
"""
import argparse
from typing import Any, Callable, Dict, List

from ...core.config import settings
from ...core.exceptions import NumericalError, ValidationError
from ...core.logging import get_logger
from ...models.certificates import CriterionVerdict, SumVerdict, Verdict
from ...models.domain import Bipartition, DensityMatrix
from ...services.criteria import gb_ball_separable, negativity_verdict, ppt_min_eig
from ...services.distance import (
    GilbertOptions,
    activatable_via_npt,
    distance_bounds,
    gilbert_upper_bound,
    ppt_mixture_witness,
    sum_criterion,
    t_ppt_lower_bound,
)
from ...services.partitions import enumerate_bipartitions
from ..reports import (
    CommandOutcome,
    activatability_payload,
    bounds_payload,
    gilbert_payload,
    sum_payload,
    verdict_payload,
    witness_matrices,
    witness_payload,
)
from ..state_spec import build_state, parse_state_spec

logger = get_logger(__name__)


def _tppt(rho: DensityMatrix, cut: Bipartition) -> Dict[str, Any]:
    value = t_ppt_lower_bound(rho, cut)
    # a positive lower bound on the distance excludes cut-separability
    verdict = Verdict.ENTANGLED if value > settings.tolerances.witness_violation else Verdict.INCONCLUSIVE
    return verdict_payload(CriterionVerdict(name="tppt", value=value, verdict=verdict, cut=cut))


def _gilbert(rho: DensityMatrix, cut: Bipartition) -> Dict[str, Any]:
    result = gilbert_upper_bound(rho, cut, GilbertOptions(seed=settings.seed))
    verdict = CriterionVerdict(name="gilbert", value=result.upper_bound, verdict=Verdict.INCONCLUSIVE, cut=cut)
    return {**verdict_payload(verdict), **gilbert_payload(result)}


def _bounds(rho: DensityMatrix, cut: Bipartition) -> Dict[str, Any]:
    return {"criterion": "bounds", **bounds_payload(distance_bounds(rho, cut, GilbertOptions(seed=settings.seed)))}


def _spectral(evaluate: Callable[[DensityMatrix, Bipartition], CriterionVerdict]):
    return lambda rho, cut: verdict_payload(evaluate(rho, cut))


PER_CUT: Dict[str, Callable[[DensityMatrix, Bipartition], Dict[str, Any]]] = {
    "ppt": _spectral(ppt_min_eig),
    "negativity": _spectral(negativity_verdict),
    "gb": _spectral(gb_ball_separable),
    "tppt": _tppt,
    "gilbert": _gilbert,
    "bounds": _bounds,
}
WHOLE_STATE = ("gme-witness", "sum", "activatable")
CRITERIA = tuple(PER_CUT) + WHOLE_STATE


def register(subparsers, parents: List[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "check",
        parents=parents,
        help="Run one criterion on a state",
        description="Run one separability or GME criterion on a state",
    )
    parser.add_argument("--state", required=True, help="state spec, e.g. isotropic:0.5, ghz:3, @state.json")
    parser.add_argument("--criterion", required=True, choices=CRITERIA)
    parser.add_argument("--cut", default=None, help="bipartition such as 1|23 (all cuts when omitted)")
    parser.add_argument("--copies", type=int, default=None, help="tensor power of the state")
    parser.set_defaults(handler=run_check)


def _per_cut(rho: DensityMatrix, criterion: str, cuts: List[Bipartition]) -> CommandOutcome:
    evaluate = PER_CUT[criterion]
    rows, failures = [], []
    for cut in cuts:
        try:
            rows.append(evaluate(rho, cut))
        except NumericalError as e:
            logger.warning("Criterion failed on cut", criterion=criterion, cut=cut.label, error=str(e))
            failures.append({"cut": cut.label, "type": type(e).__name__, "message": str(e)})

    return CommandOutcome(
        results={"criterion": criterion, "cuts": rows, "failures": failures},
        status="partial" if failures else "ok",
    )


def _whole_state(rho: DensityMatrix, criterion: str) -> CommandOutcome:
    if criterion == "gme-witness":
        cert = ppt_mixture_witness(rho)
        return CommandOutcome(
            results={"criterion": criterion, "witness": witness_payload(cert)},
            matrices={"state": rho.matrix, **witness_matrices(cert)},
        )
    if criterion == "sum":
        report = sum_criterion(rho)
        return CommandOutcome(
            results={"criterion": criterion, **sum_payload(report)},
            status="partial" if report.verdict == SumVerdict.PARTIAL else "ok",
        )
    return CommandOutcome(results={"criterion": criterion, **activatability_payload(activatable_via_npt(rho))})


def run_check(args: argparse.Namespace) -> CommandOutcome:
    """
    Dispatch a criterion to the services

    Raises:
        ValidationError: bad state, cut or criterion combination
        SolverError: whole-state SDP criteria that fail to converge
    """
    rho = build_state(parse_state_spec(args.state), copy_count=args.copies)
    n = rho.layout.require_contiguous_parties()
    logger.info("Check started", state=args.state, criterion=args.criterion, dimension=rho.dim, parties=n)

    if args.criterion in WHOLE_STATE:
        if args.cut is not None:
            raise ValidationError(f"--cut does not apply to the whole-state criterion '{args.criterion}'")
        outcome = _whole_state(rho, args.criterion)
    else:
        cuts = [Bipartition.parse(args.cut, n)] if args.cut is not None else enumerate_bipartitions(n)
        outcome = _per_cut(rho, args.criterion, cuts)

    outcome.results = {"state": args.state, "dimension": rho.dim, "parties": n, **outcome.results}
    return outcome
