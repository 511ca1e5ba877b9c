"""
Descending grid scan for a visibility p_hat in (1/3, p0] with a separable key state
"""
from typing import List, Optional

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...core.logging import get_logger
from ...models.certificates import EvidenceGrade, PHatAttempt, PHatResult, SeparabilityEvidence
from ..distance import GilbertOptions, recheck_evidence, separability_evidence, transport_evidence
from .extraction import fixed_weight_mixture, key_state, transport_weight
from .scalars import ISOTROPIC_THRESHOLD, p0

logger = get_logger(__name__)

ANCHORS = ("candidate", "p0")


def p_hat_grid(p_zero: float, points: int) -> List[float]:
    """p0 - j (p0 - 1/3) / points for j = 0 .. points-1"""
    step = (p_zero - ISOTROPIC_THRESHOLD) / points if points > 0 else 0.0
    return [p_zero - j * step for j in range(points)]


def _key_split(k: int):
    return list(range(k)), list(range(k, 2 * k))


def _evidence_at(
    p_hat: float,
    p_zero: float,
    k: int,
    n: int,
    anchor: str,
    options: Optional[GilbertOptions],
) -> SeparabilityEvidence:
    left, right = _key_split(k)
    if anchor == "candidate":
        return separability_evidence(key_state(p_hat, k, n), left, right, options)

    # Evidence for the fixed-weight mixture, carried to the key state
    mixed = separability_evidence(fixed_weight_mixture(p_hat, p_zero, k, n), left, right, options)
    if not mixed.certified:
        return mixed
    carried = transport_evidence(mixed, transport_weight(p_hat, p_zero, k, n))
    valid, reason = recheck_evidence(carried, key_state(p_hat, k, n))
    if not valid:
        return SeparabilityEvidence(
            grade=EvidenceGrade.NONE,
            left=tuple(left),
            right=tuple(right),
            message=f"transported evidence rejected: {reason}",
        )
    return carried


def find_p_hat(
    n: int,
    k: int,
    grid_points: Optional[int] = None,
    anchor: str = "candidate",
    options: Optional[GilbertOptions] = None,
) -> PHatResult:
    """
    Largest grid point p_hat in (1/3, p0] whose key state is certified separable

    Args:
        n: number of parties (>= 3)
        k: number of copies
        grid_points: grid resolution, settings.p_hat_grid_points by default
        anchor: "candidate" tests key_state(p_hat) directly; "p0" tests the
            mixture with weights fixed at p0 and transports the evidence
        options: Gilbert limits

    Returns:
        PHatResult; p_hat is None when no grid point passes
    """
    if anchor not in ANCHORS:
        raise ValidationError(f"Unknown anchor '{anchor}', expected one of {ANCHORS}")
    p_zero = p0(n, k)
    points = settings.p_hat_grid_points if grid_points is None else grid_points
    if points < 0:
        raise ValidationError(f"Grid size must be >= 0, got {points}")

    attempts: List[PHatAttempt] = []
    for index, p_hat in enumerate(p_hat_grid(p_zero, points)):
        evidence = _evidence_at(p_hat, p_zero, k, n, anchor, options)
        accepted = evidence.certified
        # the defining inequality is strict at p0
        if index == 0 and evidence.grade != EvidenceGrade.PPT_DECISIVE:
            accepted = False
        attempts.append(PHatAttempt(p_hat, evidence.grade, evidence.frobenius_distance, accepted))
        logger.info("p_hat candidate", n=n, k=k, p_hat=p_hat, grade=evidence.grade.value, accepted=accepted)

        if accepted:
            return PHatResult(
                n=n,
                k=k,
                p0=p_zero,
                p_hat=float(p_hat),
                anchor=anchor,
                evidence=evidence,
                attempts=tuple(attempts),
                message=f"accepted after {len(attempts)} grid point(s)",
            )

    message = "empty grid" if points == 0 else f"no grid point in (1/3, {p_zero:.10g}] passed"
    logger.warning("p_hat search failed", n=n, k=k, reason=message)
    return PHatResult(
        n=n,
        k=k,
        p0=p_zero,
        p_hat=None,
        anchor=anchor,
        evidence=None,
        attempts=tuple(attempts),
        message=message,
    )

