"""
Named state constructors
"""
from typing import Optional

import numpy as np

from ...core.exceptions import ValidationError
from ...models.domain import DensityMatrix, SubsystemLayout
from ..tensor import check_dimension_cap, kron_all

MAX_GHZ_PARTIES = 8


def _phi_plus_matrix() -> np.ndarray:
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = m[0, 3] = m[3, 0] = m[3, 3] = 0.5
    return m


def max_entangled_qubit() -> DensityMatrix:
    """Projector onto (|00> + |11>)/sqrt(2)"""
    return DensityMatrix(_phi_plus_matrix(), SubsystemLayout.qubits(2))


def bell() -> DensityMatrix:
    return max_entangled_qubit()


def check_visibility(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0 or np.isnan(p):
        raise ValidationError(f"Visibility p must lie in [0, 1], got {p}")
    return p


def isotropic_matrix(p: float) -> np.ndarray:
    p = check_visibility(p)
    return p * _phi_plus_matrix() + (1.0 - p) * np.eye(4, dtype=np.complex128) / 4.0


def isotropic(p: float) -> DensityMatrix:
    """rho(p) = p phi+ + (1 - p) I/4 on two qubits"""
    return DensityMatrix(isotropic_matrix(p), SubsystemLayout.qubits(2))


def maximally_mixed(n: int) -> DensityMatrix:
    """I / 2^n on n qubits"""
    if n < 1:
        raise ValidationError(f"Need at least one qubit, got {n}")
    dim = 2 ** n
    check_dimension_cap(dim)
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, SubsystemLayout.qubits(n))


def ghz(n: int) -> DensityMatrix:
    """Projector onto (|0...0> + |1...1>)/sqrt(2) on n qubits"""
    if not 2 <= n <= MAX_GHZ_PARTIES:
        raise ValidationError(f"GHZ needs 2 <= n <= {MAX_GHZ_PARTIES}, got {n}")
    dim = 2 ** n
    check_dimension_cap(dim)
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[0, 0] = m[0, -1] = m[-1, 0] = m[-1, -1] = 0.5
    return DensityMatrix(m, SubsystemLayout.qubits(n))


def product_state(*states: DensityMatrix) -> DensityMatrix:
    """Tensor product of single-party states, parties renumbered 1..len(states)"""
    dims = [s.dim for s in states]
    check_dimension_cap(int(np.prod(dims)))
    return DensityMatrix(kron_all([s.matrix for s in states]), SubsystemLayout.from_dimensions(dims))


def pure_state(vector: np.ndarray, layout: Optional[SubsystemLayout] = None) -> DensityMatrix:
    """|v><v| for a normalized copy of v"""
    v = np.asarray(vector, dtype=np.complex128).ravel()
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValidationError("Zero vector")
    v = v / norm
    if layout is None:
        layout = SubsystemLayout.from_dimensions([v.size])
    m = np.outer(v, v.conj())
    return DensityMatrix((m + m.conj().T) / 2, layout)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """
    Ginibre-distributed density matrix

    Args:
        dim: matrix dimension
        rng: numpy generator (all randomness flows through it)
        rank: number of Ginibre columns, full rank by default

    Returns:
        Hermitian PSD trace-one array
    """
    cols = dim if rank is None else rank
    g = rng.standard_normal((dim, cols)) + 1j * rng.standard_normal((dim, cols))
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return m / np.trace(m).real
