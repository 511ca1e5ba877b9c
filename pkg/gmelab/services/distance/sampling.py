"""
Random biseparable states
"""
from typing import Optional, Union

import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...models.domain import DensityMatrix, SubsystemLayout
from ..partitions import cut_factors, enumerate_bipartitions
from ..states import random_density_matrix
from ..tensor import check_dimension_cap, inverse_permutation, kron, permute_array

SeedLike = Union[int, np.random.Generator, None]


def random_biseparable(n: int, seed: SeedLike = None, local_dimension: int = 2) -> DensityMatrix:
    """
    Convex mixture over cuts of random product states across each cut

    Args:
        n: number of parties (>= 2)
        seed: integer seed or generator; None uses the configured seed
        local_dimension: dimension of each party

    Returns:
        A state in the biseparable set by construction
    """
    if n < 2:
        raise ValidationError(f"Biseparable states need n >= 2 parties, got {n}")
    layout = SubsystemLayout.from_dimensions([local_dimension] * n)
    check_dimension_cap(layout.total_dimension)
    rng = np.random.default_rng(settings.seed if seed is None else seed)

    cuts = enumerate_bipartitions(n)
    weights = rng.dirichlet(np.ones(len(cuts)))
    dims = layout.dimensions
    total = np.zeros((layout.total_dimension,) * 2, dtype=np.complex128)

    for weight, cut in zip(weights, cuts):
        left, right = cut_factors(cut, layout)
        block_left = random_density_matrix(layout.dimension_of(left), rng)
        block_right = random_density_matrix(layout.dimension_of(right), rng)
        order = left + right
        term = permute_array(kron(block_left, block_right), [dims[i] for i in order], inverse_permutation(order))
        total += weight * term

    total = (total + total.conj().T) / 2
    return DensityMatrix(total / np.trace(total).real, layout)
