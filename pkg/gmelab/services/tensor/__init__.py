"""
Dense complex-matrix algebra over labeled tensor factors
"""
from .eigen import (
    eigenvalues,
    hermitian_eig,
    min_eigenvalue,
    reconstruction_residual,
    trace_norm,
)
from .operations import (
    check_dimension_cap,
    inverse_permutation,
    keep_factors,
    kron,
    kron_all,
    partial_trace,
    partial_trace_array,
    partial_transpose,
    partial_transpose_array,
    permute_array,
    permute_factors,
    purity,
    tensor_states,
    validate_density_matrix,
)

__all__ = [
    "eigenvalues",
    "hermitian_eig",
    "min_eigenvalue",
    "reconstruction_residual",
    "trace_norm",
    "check_dimension_cap",
    "inverse_permutation",
    "keep_factors",
    "kron",
    "kron_all",
    "partial_trace",
    "partial_trace_array",
    "partial_transpose",
    "partial_transpose_array",
    "permute_array",
    "permute_factors",
    "purity",
    "tensor_states",
    "validate_density_matrix",
]
