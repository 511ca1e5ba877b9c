"""
Fully decomposable GME witness (PPT-mixture test)

min Tr(W rho) over W = P_M + Q_M^{T_M} for every canonical cut M with
0 <= P_M, Q_M <= I. Every such W is nonnegative on biseparable states, so a
negative optimum certifies genuine multipartite entanglement.
"""
from typing import List, Tuple

import numpy as np

from ...core.config import settings
from ...core.logging import get_logger
from ...models.certificates import GmeCertificate, WitnessAudit, WitnessStatus
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut, enumerate_bipartitions
from ..sdp import ProblemBuilder, SdpProblem, solve
from ..tensor import eigenvalues, partial_transpose_array
from .ppt_bound import check_sdp_dimension, is_real

logger = get_logger(__name__)


def witness_problem(rho: DensityMatrix) -> Tuple[SdpProblem, List[Bipartition], List[Tuple[int, int]], List[List[int]]]:
    """
    Build the witness SDP

    Returns:
        (problem, cuts, (P, Q) block indices per cut, transposed factors per cut)
    """
    n = rho.layout.require_contiguous_parties()
    d = rho.dim
    check_sdp_dimension(d)
    real = is_real(rho.matrix)
    matrix = rho.matrix.real.astype(np.complex128) if real else rho.matrix
    identity = np.eye(d, dtype=np.complex128)

    cuts = enumerate_bipartitions(n)
    builder = ProblemBuilder(name="ppt_mixture_witness")
    blocks: List[Tuple[int, int]] = []
    transposed: List[List[int]] = []

    for cut in cuts:
        left, _ = check_cut(cut, rho.layout)
        p = builder.add_block(d, is_complex=not real, name=f"P[{cut.label}]")
        q = builder.add_block(d, is_complex=not real, name=f"Q[{cut.label}]")
        sp = builder.add_block(d, is_complex=not real, name=f"I-P[{cut.label}]")
        sq = builder.add_block(d, is_complex=not real, name=f"I-Q[{cut.label}]")
        builder.add_hermitian_equality([(p, 1.0, None), (sp, 1.0, None)], identity)
        builder.add_hermitian_equality([(q, 1.0, None), (sq, 1.0, None)], identity)
        blocks.append((p, q))
        transposed.append(left)

    # W is P_M + Q_M^{T_M} for the first cut; every other cut must agree
    p1, q1 = blocks[0]
    zero = np.zeros((d, d), dtype=np.complex128)
    for (p, q), left in zip(blocks[1:], transposed[1:]):
        builder.add_hermitian_equality(
            [
                (p1, 1.0, None),
                (q1, 1.0, (rho.dims, transposed[0])),
                (p, -1.0, None),
                (q, -1.0, (rho.dims, left)),
            ],
            zero,
        )

    builder.set_objective(p1, matrix)
    builder.set_objective(q1, partial_transpose_array(matrix, rho.dims, transposed[0]))
    return builder.build(), cuts, blocks, transposed


def audit_witness(
    rho: DensityMatrix,
    witness: np.ndarray,
    decompositions: List[Tuple[Bipartition, np.ndarray, np.ndarray]],
    transposed: List[List[int]],
) -> WitnessAudit:
    """Re-check a witness decomposition with the Jacobi eigensolver"""
    tol = settings.tolerances
    residual = 0.0
    min_p = min_q = np.inf
    max_p = max_q = -np.inf
    for (_, p, q), left in zip(decompositions, transposed):
        rebuilt = p + partial_transpose_array(q, rho.dims, left)
        residual = max(residual, float(np.linalg.norm(witness - rebuilt)))
        ev_p = eigenvalues(p)
        ev_q = eigenvalues(q)
        min_p, max_p = min(min_p, float(ev_p[-1])), max(max_p, float(ev_p[0]))
        min_q, max_q = min(min_q, float(ev_q[-1])), max(max_q, float(ev_q[0]))

    value = float(np.real(np.sum(witness * rho.matrix.T)))
    passed = (
        residual <= tol.witness_decomposition
        and min(min_p, min_q) >= -tol.witness_psd
        and max(max_p, max_q) <= 1.0 + tol.witness_psd
    )
    return WitnessAudit(
        max_decomposition_residual=residual,
        min_eig_p=min_p,
        min_eig_q=min_q,
        max_eig_p=max_p,
        max_eig_q=max_q,
        recomputed_value=value,
        passed=passed,
    )


def _hermitize(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    return (m + m.conj().T) / 2


def ppt_mixture_witness(rho: DensityMatrix) -> GmeCertificate:
    """
    Solve the PPT-mixture witness SDP and audit its output

    Returns:
        GmeCertificate; gme-certified only when the audited value is below
        -tolerances.witness_violation

    Raises:
        DimensionError: state dimension above the SDP cap
        SolverError: solver did not reach optimality
    """
    problem, cuts, blocks, transposed = witness_problem(rho)
    logger.info(
        "Solving witness SDP",
        dim=rho.dim,
        cuts=len(cuts),
        constraints=problem.constraint_count,
    )
    solution = solve(problem).require_optimal("ppt_mixture_witness")

    decompositions = [
        (cut, _hermitize(solution.primal_blocks[p]), _hermitize(solution.primal_blocks[q]))
        for cut, (p, q) in zip(cuts, blocks)
    ]
    _, p1, q1 = decompositions[0]
    witness = _hermitize(p1 + partial_transpose_array(q1, rho.dims, transposed[0]))

    audit = audit_witness(rho, witness, decompositions, transposed)
    value = audit.recomputed_value
    certified = value < -settings.tolerances.witness_violation and audit.passed
    status = WitnessStatus.GME if certified else WitnessStatus.NO_VIOLATION

    if value < -settings.tolerances.witness_violation and not audit.passed:
        logger.warning(
            "Witness violation rejected by audit",
            value=value,
            residual=audit.max_decomposition_residual,
        )
    logger.info("Witness finished", value=value, status=status.value, iterations=solution.iterations)

    return GmeCertificate(
        witness=witness,
        decompositions=tuple(decompositions),
        value=value,
        status=status,
        audit=audit,
        solver=solution.summary(),
    )
