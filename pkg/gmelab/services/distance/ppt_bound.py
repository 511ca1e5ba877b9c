"""
PPT relaxation of the distance to cut-separable states
"""
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import sparse

from ...core.config import settings
from ...core.exceptions import DimensionError
from ...core.logging import get_logger
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut
from ..sdp import ProblemBuilder, SdpProblem, SdpSolution, solve
from ..states import copies

logger = get_logger(__name__)


def is_real(matrix: np.ndarray) -> bool:
    """Real data admits real optimal points for every formulation here"""
    return float(np.max(np.abs(matrix.imag))) <= settings.tolerances.hermitian


def check_sdp_dimension(dim: int) -> None:
    if dim > settings.sdp_dimension_cap:
        raise DimensionError(f"Dimension {dim} exceeds the SDP cap {settings.sdp_dimension_cap}")


def t_ppt_problem(rho: DensityMatrix, b: Bipartition) -> SdpProblem:
    """
    min 1/2 Tr(A + B)
    s.t. A - B + sigma = rho, S = sigma^{T_M}, Tr sigma = 1, A, B, sigma, S PSD
    """
    left, _ = check_cut(b, rho.layout)
    d = rho.dim
    check_sdp_dimension(d)
    real = is_real(rho.matrix)
    rhs = rho.matrix.real.astype(np.complex128) if real else rho.matrix

    builder = ProblemBuilder(name=f"t_ppt[{b.label}]")
    a = builder.add_block(d, is_complex=not real, name="A")
    bb = builder.add_block(d, is_complex=not real, name="B")
    sigma = builder.add_block(d, is_complex=not real, name="sigma")
    s = builder.add_block(d, is_complex=not real, name="sigma_pt")

    half = 0.5 * sparse.identity(d, dtype=np.complex128, format="coo")
    builder.set_objective(a, half)
    builder.set_objective(bb, half)

    builder.add_hermitian_equality([(a, 1.0, None), (bb, -1.0, None), (sigma, 1.0, None)], rhs)
    builder.add_hermitian_equality(
        [(s, 1.0, None), (sigma, -1.0, (rho.dims, left))],
        np.zeros((d, d), dtype=np.complex128),
    )
    builder.add_trace_constraint(sigma, 1.0)
    return builder.build()


def t_ppt_solution(rho: DensityMatrix, b: Bipartition) -> Tuple[float, SdpSolution]:
    """Lower bound together with the solver output"""
    solution = solve(t_ppt_problem(rho, b)).require_optimal(f"t_ppt on {b.label}")
    value = float(np.clip(min(solution.primal_objective, solution.dual_objective), 0.0, 1.0))
    logger.info(
        "PPT distance bound",
        cut=b.label,
        value=value,
        iterations=solution.iterations,
        gap=solution.gap,
    )
    return value, solution


def t_ppt_lower_bound(rho: DensityMatrix, b: Bipartition) -> float:
    """
    Lower bound on T_{M|M̄}(rho): half the trace distance to the PPT set

    The PPT set contains every state separable across the cut.

    Raises:
        DimensionError: state dimension above the SDP cap
        SolverError: solver did not reach optimality
    """
    value, _ = t_ppt_solution(rho, b)
    return value


def t_ppt_copy_trend(rho: DensityMatrix, b: Bipartition, ks: Sequence[int] = (1, 2, 3)) -> List[Dict[str, float]]:
    """
    Lower bounds on the regrouped cut of rho^(x)k for each k

    Returns:
        One {"k", "lower"} record per k, in the given order
    """
    trend = []
    for k in ks:
        value = t_ppt_lower_bound(copies(rho, k), b)
        trend.append({"k": int(k), "lower": value})
        logger.info("Copy trend point", cut=b.label, k=k, lower=value)
    return trend
