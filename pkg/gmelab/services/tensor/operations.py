"""
Tensor and partial operations over labeled factors
"""
from typing import Iterable, Sequence, Set

import numpy as np

from ...core.config import settings
from ...core.exceptions import DimensionError, ValidationError
from ...models.domain import ComplexMatrix, DensityMatrix, SubsystemLayout
from .eigen import hermitian_eig


def _require_square(a: np.ndarray, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {a.shape}")
    return a


def _check_factor_indices(indices: Iterable[int], size: int) -> Set[int]:
    chosen = set(int(i) for i in indices)
    bad = sorted(i for i in chosen if not 0 <= i < size)
    if bad:
        raise ValidationError(f"Factor indices {bad} out of range for {size} factors")
    return chosen


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product, left factor most significant"""
    a = _require_square(a, "Left operand")
    b = _require_square(b, "Right operand")
    return np.kron(a, b)


def kron_all(matrices: Sequence[ComplexMatrix]) -> ComplexMatrix:
    result = np.ones((1, 1), dtype=np.complex128)
    for m in matrices:
        result = kron(result, m)
    return result


def partial_transpose_array(
    matrix: np.ndarray,
    dims: Sequence[int],
    factors: Iterable[int],
) -> np.ndarray:
    """
    Partial transpose of a raw matrix over the given factor indices

    Pure index shuffle: every output entry is an input entry.
    """
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    chosen = _check_factor_indices(factors, n)
    dim = int(np.prod(dims))
    tensor = np.asarray(matrix).reshape(dims + dims)
    axes = list(range(2 * n))
    for i in chosen:
        axes[i], axes[n + i] = n + i, i
    return np.ascontiguousarray(tensor.transpose(axes)).reshape(dim, dim)


def partial_transpose(rho: DensityMatrix, factor_set: Iterable[int]) -> ComplexMatrix:
    """Transpose on the designated factors of rho's layout"""
    return partial_transpose_array(rho.matrix, rho.dims, factor_set)


def partial_trace_array(
    matrix: np.ndarray,
    dims: Sequence[int],
    traced: Iterable[int],
) -> np.ndarray:
    """Trace out the given factor indices of a raw matrix"""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    chosen = sorted(_check_factor_indices(traced, n), reverse=True)
    tensor = np.asarray(matrix).reshape(dims + dims)
    remaining = n
    for i in chosen:
        tensor = np.trace(tensor, axis1=i, axis2=i + remaining)
        remaining -= 1
    kept = [d for i, d in enumerate(dims) if i not in set(chosen)]
    dim = int(np.prod(kept)) if kept else 1
    return tensor.reshape(dim, dim)


def partial_trace(rho: DensityMatrix, traced_factors: Iterable[int]) -> DensityMatrix:
    """Reduced state; the layout drops the traced factors"""
    traced = _check_factor_indices(traced_factors, rho.layout.size)
    if len(traced) >= rho.layout.size:
        raise ValidationError("Cannot trace out every factor")
    kept = [i for i in range(rho.layout.size) if i not in traced]
    reduced = partial_trace_array(rho.matrix, rho.dims, traced)
    return DensityMatrix(reduced, rho.layout.select(kept))


def keep_factors(rho: DensityMatrix, kept_factors: Iterable[int]) -> DensityMatrix:
    """Reduced state on the listed factors (in layout order)"""
    kept = _check_factor_indices(kept_factors, rho.layout.size)
    return partial_trace(rho, [i for i in range(rho.layout.size) if i not in kept])


def _check_permutation(perm: Sequence[int], size: int) -> list:
    perm = [int(i) for i in perm]
    if sorted(perm) != list(range(size)):
        raise ValidationError(f"{perm} is not a permutation of {size} factors")
    return perm


def permute_array(matrix: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder factors so that new factor i is old factor perm[i]"""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    perm = _check_permutation(perm, n)
    dim = int(np.prod(dims))
    tensor = np.asarray(matrix).reshape(dims + dims)
    axes = perm + [n + i for i in perm]
    return np.ascontiguousarray(tensor.transpose(axes)).reshape(dim, dim)


def permute_factors(rho: DensityMatrix, perm: Sequence[int]) -> DensityMatrix:
    """Reorder factors and carry the layout labels along"""
    perm = _check_permutation(perm, rho.layout.size)
    if perm == list(range(rho.layout.size)):
        return rho
    return DensityMatrix(
        permute_array(rho.matrix, rho.dims, perm),
        rho.layout.select(perm),
    )


def inverse_permutation(perm: Sequence[int]) -> list:
    inverse = [0] * len(perm)
    for new, old in enumerate(perm):
        inverse[old] = new
    return inverse


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)"""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def tensor_states(states: Sequence[DensityMatrix]) -> DensityMatrix:
    """Tensor product of states; layouts concatenated in order"""
    if not states:
        raise ValidationError("Need at least one state")
    factors = tuple(f for s in states for f in s.layout.factors)
    layout = SubsystemLayout(factors)
    check_dimension_cap(layout.total_dimension)
    return DensityMatrix(kron_all([s.matrix for s in states]), layout)


def check_dimension_cap(dim: int) -> None:
    if dim > settings.dimension_cap:
        raise DimensionError(f"Dimension {dim} exceeds cap {settings.dimension_cap}")


def validate_density_matrix(rho: DensityMatrix) -> np.ndarray:
    """
    Full invariant check including positivity

    Returns:
        Descending eigenvalues of rho
    """
    values, _ = hermitian_eig(rho.matrix)
    if values.size and values[-1] < -settings.tolerances.psd:
        raise ValidationError(f"Density matrix is not PSD (min eigenvalue {values[-1]:.3e})")
    return values
