"""
Graded separability evidence for a state split into two sides

Grades, strongest first:
    ppt-decisive   PPT on a 2x2 or 2x3 split
    purity-ball    Tr(rho^2) <= 1/(d-1)
    gilbert+ball   rho = (1 - lam) sigma_G + lam B, sigma_G an explicit product
                   mixture and B inside the purity ball
    numerically-separable  Gilbert residual below target, no proof
"""
from dataclasses import replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...core.logging import get_logger
from ...models.certificates import EvidenceGrade, ProductMixture, SeparabilityEvidence
from ...models.domain import DensityMatrix
from ..criteria.spectral import in_purity_ball, is_ppt_decisive
from ..tensor import min_eigenvalue, partial_transpose_array, trace_norm
from .gilbert import GilbertApproximator, GilbertOptions, split_order

logger = get_logger(__name__)

# Upgrade uses half of the largest admissible identity weight
_BALL_SHRINK = 0.5
_MAX_BALL_WEIGHT = 0.5


def basis_mixture(dim_left: int, dim_right: int) -> ProductMixture:
    """I/d written as the uniform mixture of computational product states"""
    d = dim_left * dim_right
    left = np.repeat(np.eye(dim_left, dtype=np.complex128), dim_right, axis=0)
    right = np.tile(np.eye(dim_right, dtype=np.complex128), (dim_left, 1))
    return ProductMixture(np.full(d, 1.0 / d), left, right)


def _blend(first: ProductMixture, w_first: float, second: ProductMixture, w_second: float) -> ProductMixture:
    return ProductMixture(
        np.concatenate([w_first * first.weights, w_second * second.weights]),
        np.vstack([first.left, second.left]),
        np.vstack([first.right, second.right]),
    )


def _trace_bound(matrix: np.ndarray, approx: np.ndarray) -> float:
    diff = matrix - approx
    diff = (diff + diff.conj().T) / 2
    return min(np.sqrt(matrix.shape[0]) * float(np.linalg.norm(diff)), trace_norm(diff)) / 2.0


def _upgrade_weight(matrix: np.ndarray, dim_left: int) -> float:
    """Identity weight lam with matrix - lam I/d PSD and PPT"""
    d = matrix.shape[0]
    dim_right = d // dim_left
    floor = min(
        min_eigenvalue(matrix),
        min_eigenvalue(partial_transpose_array(matrix, [dim_left, dim_right], [0])),
    )
    return float(min(_MAX_BALL_WEIGHT, max(0.0, _BALL_SHRINK * d * floor)))


def _gilbert_evidence(
    matrix: np.ndarray,
    left: Tuple[int, ...],
    right: Tuple[int, ...],
    dim_left: int,
    dim_right: int,
    options: Optional[GilbertOptions],
) -> SeparabilityEvidence:
    d = dim_left * dim_right
    target = settings.evidence_target_distance
    radius = 1.0 / np.sqrt(d * (d - 1))
    lam = _upgrade_weight(matrix, dim_left)
    required = lam * radius / (1.0 - lam) if lam > 0 else 0.0
    base = options or GilbertOptions()

    if required >= settings.evidence_min_distance:
        stretched = (matrix - lam * np.eye(d) / d) / (1.0 - lam)
        opts = replace(base, tolerance=min(required, target))
        result = GilbertApproximator(stretched, dim_left, dim_right, opts).run()
        sigma = result.mixture.matrix()
        delta = result.frobenius_distance

        if delta <= required:
            ball = np.eye(d) / d + ((1.0 - lam) / lam) * (stretched - sigma)
            ball = (ball + ball.conj().T) / 2
            ball_purity = float(np.sum(np.abs(ball) ** 2))
            if in_purity_ball(ball_purity, d):
                return SeparabilityEvidence(
                    grade=EvidenceGrade.GILBERT_BALL,
                    left=left,
                    right=right,
                    frobenius_distance=(1.0 - lam) * delta,
                    trace_bound=0.0,
                    ball_weight=lam,
                    ball_purity=ball_purity,
                    mixture=result.mixture,
                    ball_state=ball,
                    iterations=result.iterations,
                    message=f"ball upgrade with weight {lam:.6g}",
                )

        # Fall back: the same run still approximates the unstretched state
        mixture = _blend(result.mixture, 1.0 - lam, basis_mixture(dim_left, dim_right), lam)
        distance = (1.0 - lam) * delta
        iterations = result.iterations
        message = f"upgrade failed: residual {delta:.3e} above {required:.3e}"
    else:
        opts = replace(base, tolerance=target)
        result = GilbertApproximator(matrix, dim_left, dim_right, opts).run()
        mixture = result.mixture
        distance = result.frobenius_distance
        iterations = result.iterations
        message = f"no interior margin (lam={lam:.3e})"

    grade = EvidenceGrade.GILBERT if distance <= target else EvidenceGrade.NONE
    return SeparabilityEvidence(
        grade=grade,
        left=left,
        right=right,
        frobenius_distance=distance,
        trace_bound=_trace_bound(matrix, mixture.matrix()),
        mixture=mixture,
        iterations=iterations,
        message=message,
    )


def separability_evidence(
    rho: DensityMatrix,
    left: Sequence[int],
    right: Sequence[int],
    options: Optional[GilbertOptions] = None,
) -> SeparabilityEvidence:
    """
    Strongest available separability evidence across left | right

    Args:
        rho: state
        left: factor positions on one side
        right: the remaining factor positions
        options: Gilbert limits for the numerical grades

    Returns:
        SeparabilityEvidence; grade NONE for NPT splits
    """
    left, right = tuple(left), tuple(right)
    matrix, dim_left, dim_right = split_order(rho, left, right)
    d = dim_left * dim_right

    pt_floor = min_eigenvalue(partial_transpose_array(matrix, [dim_left, dim_right], [0]))
    if pt_floor < -settings.tolerances.ppt:
        evidence = SeparabilityEvidence(
            grade=EvidenceGrade.NONE, left=left, right=right, message=f"npt ({pt_floor:.3e})"
        )
    elif is_ppt_decisive(dim_left, dim_right):
        evidence = SeparabilityEvidence(
            grade=EvidenceGrade.PPT_DECISIVE, left=left, right=right, message=f"ppt {dim_left}x{dim_right}"
        )
    else:
        state_purity = float(np.sum(np.abs(matrix) ** 2))
        if in_purity_ball(state_purity, d):
            evidence = SeparabilityEvidence(
                grade=EvidenceGrade.PURITY_BALL,
                left=left,
                right=right,
                ball_weight=1.0,
                ball_purity=state_purity,
                message="inside purity ball",
            )
        else:
            evidence = _gilbert_evidence(matrix, left, right, dim_left, dim_right, options)

    logger.debug(
        "Separability evidence",
        grade=evidence.grade.value,
        split=f"{dim_left}x{dim_right}",
        distance=evidence.frobenius_distance,
    )
    return evidence


def transport_evidence(evidence: SeparabilityEvidence, mu: float) -> SeparabilityEvidence:
    """
    Evidence for mu I/d + (1 - mu) rho given evidence for rho

    Mixing with the maximally mixed state never increases the residual.
    """
    if not 0.0 <= mu <= 1.0:
        raise ValidationError(f"Mixing weight {mu} outside [0, 1]")
    grade = evidence.grade
    if grade in (EvidenceGrade.PPT_DECISIVE, EvidenceGrade.NONE) or mu == 0.0:
        return evidence

    keep = 1.0 - mu
    if grade == EvidenceGrade.PURITY_BALL:
        # the ball is convex and contains I/d
        return replace(evidence, ball_purity=None, message=f"{evidence.message}; transported mu={mu:.6g}")

    if grade == EvidenceGrade.GILBERT_BALL:
        d = evidence.ball_state.shape[0]
        lam = evidence.ball_weight
        new_lam = 1.0 - keep * (1.0 - lam)
        ball = (keep * lam * evidence.ball_state + mu * np.eye(d) / d) / new_lam
        return replace(
            evidence,
            ball_weight=new_lam,
            ball_state=ball,
            ball_purity=float(np.sum(np.abs(ball) ** 2)),
            frobenius_distance=keep * evidence.frobenius_distance,
            message=f"{evidence.message}; transported mu={mu:.6g}",
        )

    # numerically separable: add the basis atoms
    mixture = evidence.mixture
    dim_left = mixture.left.shape[1]
    dim_right = mixture.right.shape[1]
    return replace(
        evidence,
        mixture=_blend(mixture, keep, basis_mixture(dim_left, dim_right), mu),
        frobenius_distance=keep * evidence.frobenius_distance,
        trace_bound=keep * evidence.trace_bound,
        message=f"{evidence.message}; transported mu={mu:.6g}",
    )


def _check_mixture(mixture: ProductMixture) -> Optional[str]:
    tol = settings.tolerances.certificate_weights
    if np.any(mixture.weights < -tol):
        return "negative mixture weight"
    if abs(float(np.sum(mixture.weights)) - 1.0) > tol:
        return "mixture weights do not sum to one"
    norms = np.concatenate([np.linalg.norm(mixture.left, axis=1), np.linalg.norm(mixture.right, axis=1)])
    if np.max(np.abs(norms - 1.0)) > settings.tolerances.unit_norm:
        return "mixture atoms are not unit vectors"
    return None


def recheck_evidence(evidence: SeparabilityEvidence, rho: DensityMatrix) -> Tuple[bool, str]:
    """
    Re-validate stored evidence against a state without re-running Gilbert

    Returns:
        (valid, reason)
    """
    tol = settings.tolerances
    try:
        matrix, dim_left, dim_right = split_order(rho, evidence.left, evidence.right)
    except ValidationError as e:
        return False, str(e)
    d = dim_left * dim_right
    grade = evidence.grade

    if grade == EvidenceGrade.NONE:
        return False, "no evidence"

    if grade == EvidenceGrade.PPT_DECISIVE:
        if not is_ppt_decisive(dim_left, dim_right):
            return False, f"split {dim_left}x{dim_right} is not ppt-decisive"
        floor = min_eigenvalue(partial_transpose_array(matrix, [dim_left, dim_right], [0]))
        if floor < -tol.ppt:
            return False, f"partial transpose eigenvalue {floor:.3e}"
        return True, "ppt-decisive"

    if grade == EvidenceGrade.PURITY_BALL:
        state_purity = float(np.sum(np.abs(matrix) ** 2))
        if not in_purity_ball(state_purity, d):
            return False, f"purity {state_purity:.6g} outside ball"
        return True, "purity ball"

    if evidence.mixture is None:
        return False, "missing product mixture"
    if evidence.mixture.left.shape[1] != dim_left or evidence.mixture.right.shape[1] != dim_right:
        return False, "mixture dimensions do not match the split"
    problem = _check_mixture(evidence.mixture)
    if problem:
        return False, problem

    if grade == EvidenceGrade.GILBERT_BALL:
        ball = evidence.ball_state
        lam = evidence.ball_weight
        if ball is None or not 0.0 < lam <= 1.0:
            return False, "missing ball decomposition"
        if abs(complex(np.trace(ball)) - 1.0) > tol.trace:
            return False, "ball state trace differs from 1"
        if float(np.max(np.abs(ball - ball.conj().T))) > tol.hermitian:
            return False, "ball state is not Hermitian"
        ball_purity = float(np.sum(np.abs(ball) ** 2))
        if not in_purity_ball(ball_purity, d):
            return False, f"ball purity {ball_purity:.6g} above {1.0 / (d - 1):.6g}"
        rebuilt = (1.0 - lam) * evidence.mixture.matrix() + lam * ball
        residual = float(np.max(np.abs(rebuilt - matrix)))
        if residual > tol.certificate_residual:
            return False, f"ball decomposition residual {residual:.3e}"
        return True, "gilbert+ball"

    distance = float(np.linalg.norm(matrix - evidence.mixture.matrix()))
    if distance > settings.evidence_target_distance:
        return False, f"residual {distance:.3e} above target"
    return True, "numerically separable"
