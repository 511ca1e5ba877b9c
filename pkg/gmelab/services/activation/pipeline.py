"""
End-to-end activation pipeline for sigma_n(p)^(x)k
"""
from typing import Optional

from ...core.exceptions import CertificateError, ValidationError
from ...core.logging import get_logger
from ...models.certificates import ActivationReport
from ..distance import GilbertOptions, activatable_via_npt
from .certificate import build_biseparable_certificate, target_state, verify_certificate
from .scalars import ISOTROPIC_THRESHOLD, p0
from .search import find_p_hat

logger = get_logger(__name__)


def run_activation(
    n: int,
    k: int,
    p: Optional[float] = None,
    grid_points: Optional[int] = None,
    anchor: str = "candidate",
    options: Optional[GilbertOptions] = None,
) -> ActivationReport:
    """
    p0, p_hat search, certificate construction, verification and the
    activatability check of the same state

    Args:
        n: number of parties (>= 3)
        k: number of copies
        p: visibility to certify at; searched for when None

    Raises:
        CertificateError: no p_hat could be certified
    """
    p_zero = p0(n, k)
    logger.info("Activation started", n=n, k=k, p0=p_zero, p=p)

    search = None
    key_evidence = None
    if p is None:
        search = find_p_hat(n, k, grid_points=grid_points, anchor=anchor, options=options)
        if not search.found:
            raise CertificateError(f"p_hat search for n={n}, k={k} failed: {search.message}")
        p = search.p_hat
        key_evidence = search.evidence
        logger.info("p_hat found", p_hat=p, grade=key_evidence.grade.value)
    elif not 0.0 <= p <= 1.0:
        raise ValidationError(f"Visibility {p} outside [0, 1]")

    target = target_state(n, k, p)
    certificate = build_biseparable_certificate(n, k, p, key_evidence=key_evidence)
    logger.info("Verifying certificate", terms=len(certificate.terms), dimension=target.dim)
    verification = verify_certificate(certificate, target)
    activatability = activatable_via_npt(target)

    key_block_evidence = None
    if certificate.activation_relevant:
        key_block_evidence = certificate.terms[-1].separability_evidence[0]

    report = ActivationReport(
        n=n,
        k=k,
        p0=p_zero,
        p_hat=search.p_hat if search is not None else None,
        p=p,
        certificate=certificate,
        verification=verification,
        activatability=activatability,
        key_state_evidence=key_block_evidence,
        search=search,
    )
    logger.info(
        "Activation finished",
        p=p,
        passed=verification.passed,
        activatability=activatability.verdict.value,
        relevant=p > ISOTROPIC_THRESHOLD,
    )
    return report
