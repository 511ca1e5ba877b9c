"""
Sum criterion over all cuts and two-sided distance bounds
"""
import concurrent.futures
from typing import List, Optional, Tuple

from ...core.config import settings
from ...core.exceptions import NumericalError, SolverError
from ...core.logging import get_logger
from ...models.certificates import DistanceBounds, SumCriterionReport, SumVerdict
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut, enumerate_bipartitions
from ..states import copies
from .gilbert import GilbertOptions, gilbert_upper_bound
from .ppt_bound import check_sdp_dimension, t_ppt_lower_bound, t_ppt_solution

logger = get_logger(__name__)


def sum_threshold(n: int) -> int:
    """Largest sum of cut distances a biseparable n-partite state can reach"""
    return 2 ** (n - 1) - 2


def _cut_bound(rho: DensityMatrix, cut: Bipartition) -> Tuple[Optional[float], Optional[str]]:
    try:
        return t_ppt_lower_bound(rho, cut), None
    except SolverError as e:
        logger.warning("Cut bound failed", cut=cut.label, error=str(e))
        return None, f"{cut.label}: {e}"


def sum_criterion(rho: DensityMatrix) -> SumCriterionReport:
    """
    Sum of PPT lower bounds over every canonical cut against 2^(n-1) - 2

    Cuts run in parallel; results are merged in canonical cut order. A solver
    failure on some cut leaves its bound empty; the verdict is then partial
    unless the remaining bounds already exceed the threshold.
    """
    n = rho.layout.require_contiguous_parties()
    check_sdp_dimension(rho.dim)
    cuts = enumerate_bipartitions(n)

    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, settings.threads)) as executor:
        results = list(executor.map(lambda cut: _cut_bound(rho, cut), cuts))

    bounds = tuple(value for value, _ in results)
    failures = tuple(reason for _, reason in results if reason is not None)
    total = float(sum(v for v in bounds if v is not None))
    threshold = float(sum_threshold(n))

    if total > threshold + settings.tolerances.sum_margin:
        verdict = SumVerdict.GME
    elif failures:
        verdict = SumVerdict.PARTIAL
    else:
        verdict = SumVerdict.NO_VIOLATION

    logger.info("Sum criterion", n=n, total=total, threshold=threshold, verdict=verdict.value)
    return SumCriterionReport(
        n=n,
        cuts=tuple(cut.label for cut in cuts),
        lower_bounds=bounds,
        total=total,
        threshold=threshold,
        verdict=verdict,
        failures=failures,
    )


def first_firing_copy(rho: DensityMatrix, k_max: int) -> Tuple[Optional[int], List[SumCriterionReport]]:
    """
    First copy count k <= k_max at which the sum criterion certifies GME

    Stops early when k copies no longer fit under the SDP cap. The k found is
    the first that fires at this resolution, not a proven minimum.

    Returns:
        (k or None, one report per k tried)
    """
    reports: List[SumCriterionReport] = []
    for k in range(1, k_max + 1):
        if rho.dim ** k > settings.sdp_dimension_cap:
            logger.info("Copy search stopped at SDP cap", k=k, dimension=rho.dim ** k)
            break
        report = sum_criterion(copies(rho, k))
        reports.append(report)
        if report.verdict == SumVerdict.GME:
            return k, reports
    return None, reports


def distance_bounds(
    rho: DensityMatrix,
    b: Bipartition,
    options: Optional[GilbertOptions] = None,
) -> DistanceBounds:
    """
    Interval [lower, upper] on T_{M|M̄}(rho)

    Raises:
        NumericalError: lower exceeds upper beyond tolerances.bound_order
    """
    check_cut(b, rho.layout)
    lower, solution = t_ppt_solution(rho, b)
    gilbert = gilbert_upper_bound(rho, b, options)
    upper = gilbert.upper_bound

    if lower > upper + settings.tolerances.bound_order:
        raise NumericalError(f"Bound order violated on {b.label}: lower {lower:.9g} > upper {upper:.9g}")

    return DistanceBounds(
        cut=b,
        lower=lower,
        upper=upper,
        sdp_iterations=solution.iterations,
        gilbert_iterations=gilbert.iterations,
        frobenius_distance=gilbert.frobenius_distance,
        gilbert_capped=gilbert.capped,
        residuals={
            "primal": solution.primal_residual,
            "dual": solution.dual_residual,
            "gap": solution.gap,
        },
    )
