"""
Hermitian eigensolver: cyclic Jacobi with complex 2x2 rotations

Rotations are applied in round-robin order so that every round touches
disjoint index pairs and can be applied to whole columns and rows at once.
"""
from typing import List, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...core.logging import get_logger
from ...models.domain import ComplexMatrix

logger = get_logger(__name__)


def _round_robin(dim: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Pairings of 0..dim-1 into disjoint (p, q) pairs, one list per round"""
    players = list(range(dim))
    if dim % 2:
        players.append(-1)  # bye
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < 0 or b < 0:
                continue
            ps.append(min(a, b))
            qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_diagonal_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def check_hermitian(a: np.ndarray, tol: float) -> np.ndarray:
    """Square Hermitian precondition shared by eigen and norm operations"""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"Expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("Matrix has non-finite entries")
    if a.size:
        deviation = float(np.max(np.abs(a - a.conj().T)))
        if deviation > tol:
            raise ValidationError(f"Matrix is not Hermitian (deviation {deviation:.3e})")
    return a


def hermitian_eig(a: ComplexMatrix) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix

    Args:
        a: Hermitian matrix (deviation within tolerances.hermitian_input)

    Returns:
        (eigenvalues in descending order, unitary matrix of eigenvector columns)
    """
    tol = settings.tolerances
    a = check_hermitian(a, tol.hermitian_input)
    dim = a.shape[0]
    work = (a + a.conj().T) / 2
    vectors = np.eye(dim, dtype=np.complex128)

    scale = float(np.linalg.norm(work))
    if dim <= 1 or scale == 0.0:
        return np.real(np.diag(work)).copy(), vectors

    threshold = tol.jacobi_offdiag * scale
    rounds = _round_robin(dim)
    converged = False

    for sweep in range(tol.jacobi_max_sweeps):
        if _off_diagonal_norm(work) < threshold:
            converged = True
            break

        for ps, qs in rounds:
            apq = work[ps, qs]
            r = np.abs(apq)
            active = r > 0.0
            if not np.any(active):
                continue

            app = work[ps, ps].real
            aqq = work[qs, qs].real
            r_safe = np.where(active, r, 1.0)
            phase = np.where(active, apq / r_safe, 1.0)

            theta = (aqq - app) / (2.0 * r_safe)
            t = np.where(
                theta == 0.0,
                1.0,
                np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0)),
            )
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c

            u_pp = c
            u_pq = s
            u_qp = -s * phase.conj()
            u_qq = c * phase.conj()

            # A <- A U
            col_p = work[:, ps].copy()
            col_q = work[:, qs].copy()
            work[:, ps] = col_p * u_pp + col_q * u_qp
            work[:, qs] = col_p * u_pq + col_q * u_qq

            # A <- U^H A
            row_p = work[ps, :].copy()
            row_q = work[qs, :].copy()
            work[ps, :] = np.conj(u_pp)[:, None] * row_p + np.conj(u_qp)[:, None] * row_q
            work[qs, :] = np.conj(u_pq)[:, None] * row_p + np.conj(u_qq)[:, None] * row_q

            # V <- V U
            vec_p = vectors[:, ps].copy()
            vec_q = vectors[:, qs].copy()
            vectors[:, ps] = vec_p * u_pp + vec_q * u_qp
            vectors[:, qs] = vec_p * u_pq + vec_q * u_qq

        logger.debug("Jacobi sweep", sweep=sweep, offdiag=_off_diagonal_norm(work))
    else:
        converged = _off_diagonal_norm(work) < threshold

    if not converged:
        logger.warning(
            "Jacobi did not converge",
            dim=dim,
            offdiag=_off_diagonal_norm(work),
            sweeps=tol.jacobi_max_sweeps,
        )

    eigenvalues = np.real(np.diag(work)).copy()
    order = np.argsort(-eigenvalues, kind="stable")
    return eigenvalues[order], vectors[:, order]


def eigenvalues(a: ComplexMatrix) -> np.ndarray:
    """Descending eigenvalues of a Hermitian matrix"""
    return hermitian_eig(a)[0]


def min_eigenvalue(a: ComplexMatrix) -> float:
    return float(hermitian_eig(a)[0][-1])


def trace_norm(a: ComplexMatrix) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix"""
    return float(np.sum(np.abs(hermitian_eig(a)[0])))


def reconstruction_residual(a: ComplexMatrix, values: np.ndarray, vectors: np.ndarray) -> float:
    """Relative Frobenius residual of a = V diag(values) V^H"""
    a = np.asarray(a, dtype=np.complex128)
    norm = float(np.linalg.norm(a))
    rebuilt = (vectors * values) @ vectors.conj().T
    return float(np.linalg.norm(a - rebuilt)) / (norm if norm > 0 else 1.0)
