"""
Spectral separability criteria: PPT, negativity, purity ball, fidelity
"""
import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...models.certificates import CriterionVerdict, Verdict
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut
from ..tensor import min_eigenvalue, partial_transpose_array, purity, trace_norm

# PPT is necessary and sufficient up to 2x3
PPT_DECISIVE_DIMENSION = 6


def is_ppt_decisive(dim_left: int, dim_right: int) -> bool:
    return dim_left * dim_right <= PPT_DECISIVE_DIMENSION


def ppt_min_eigenvalue_array(matrix: np.ndarray, dims, left) -> float:
    """Minimum eigenvalue of a raw matrix transposed on `left`"""
    return min_eigenvalue(partial_transpose_array(matrix, dims, left))


def ppt_min_eig(rho: DensityMatrix, b: Bipartition) -> CriterionVerdict:
    """
    PPT test across a cut

    Entangled when the partial transpose has an eigenvalue below -tol;
    separable only when the cut is 2x2 or 2x3.
    """
    left, right = check_cut(b, rho.layout)
    value = ppt_min_eigenvalue_array(rho.matrix, rho.dims, left)
    tol = settings.tolerances.ppt

    if value < -tol:
        verdict = Verdict.ENTANGLED
    elif is_ppt_decisive(rho.layout.dimension_of(left), rho.layout.dimension_of(right)):
        verdict = Verdict.SEPARABLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return CriterionVerdict(name="ppt", value=value, verdict=verdict, cut=b)


def negativity_array(matrix: np.ndarray, dims, left) -> float:
    value = (trace_norm(partial_transpose_array(matrix, dims, left)) - 1.0) / 2.0
    return value if value >= settings.tolerances.negativity_clip else 0.0


def negativity(rho: DensityMatrix, b: Bipartition) -> float:
    """(||rho^{T_M}||_1 - 1) / 2, clipped to zero below the noise floor"""
    left, _ = check_cut(b, rho.layout)
    return negativity_array(rho.matrix, rho.dims, left)


def negativity_verdict(rho: DensityMatrix, b: Bipartition) -> CriterionVerdict:
    value = negativity(rho, b)
    verdict = Verdict.ENTANGLED if value > 0.0 else Verdict.INCONCLUSIVE
    return CriterionVerdict(name="negativity", value=value, verdict=verdict, cut=b)


def in_purity_ball(state_purity: float, dim: int) -> bool:
    """Tr(rho^2) <= 1/(d-1): the separable ball around the maximally mixed state"""
    return state_purity <= 1.0 / (dim - 1) + settings.tolerances.gb_ball


def gb_ball_separable(rho: DensityMatrix, b: Bipartition) -> CriterionVerdict:
    """Purity-ball sufficient condition; never reports entanglement"""
    check_cut(b, rho.layout)
    value = purity(rho)
    verdict = Verdict.SEPARABLE if in_purity_ball(value, rho.dim) else Verdict.INCONCLUSIVE
    return CriterionVerdict(name="gb", value=value, verdict=verdict, cut=b)


def projector_fidelity(rho: DensityMatrix, psi: DensityMatrix) -> float:
    """Tr(rho psi) for a rank-one projector psi on the same layout"""
    if rho.dims != psi.dims:
        raise ValidationError(f"Layouts differ: {rho.dims} vs {psi.dims}")
    if abs(purity(psi) - 1.0) > settings.tolerances.purity_rank_one:
        raise ValidationError("psi must be a rank-one projector")
    value = complex(np.sum(rho.matrix * psi.matrix.T))
    if abs(value.imag) > settings.tolerances.fidelity_imaginary:
        raise ValidationError(f"Fidelity has imaginary part {value.imag:.3e}")
    return value.real
