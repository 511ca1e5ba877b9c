"""
Tensor-product structure of states and product-aware cut certification
"""
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.logging import get_logger
from ...models.certificates import CriterionVerdict, Verdict
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut, split_for_factors
from ..tensor import inverse_permutation, kron, partial_trace_array, partial_transpose_array, permute_array, trace_norm
from .spectral import in_purity_ball, is_ppt_decisive, ppt_min_eigenvalue_array

logger = get_logger(__name__)


def _splits_as_product(matrix: np.ndarray, dims: Sequence[int], subset: Sequence[int]) -> bool:
    """True when matrix = rho_subset (x) rho_rest up to factor order"""
    n = len(dims)
    rest = [i for i in range(n) if i not in subset]
    reduced_s = partial_trace_array(matrix, dims, rest)
    reduced_r = partial_trace_array(matrix, dims, subset)
    order = list(subset) + rest
    product = kron(reduced_s, reduced_r)
    rebuilt = permute_array(product, [dims[i] for i in order], inverse_permutation(order))
    return float(np.max(np.abs(rebuilt - matrix))) <= settings.tolerances.product_structure


def _factorize(matrix: np.ndarray, dims: Sequence[int], labels: List[int]) -> List[List[int]]:
    n = len(dims)
    if n == 1:
        return [labels]
    for size in range(1, n // 2 + 1):
        for subset in combinations(range(n), size):
            # each split is seen once: for half-size splits keep factor 0 in the subset
            if 2 * size == n and 0 not in subset:
                continue
            if not _splits_as_product(matrix, dims, subset):
                continue
            rest = [i for i in range(n) if i not in subset]
            left = _factorize(
                partial_trace_array(matrix, dims, rest),
                [dims[i] for i in subset],
                [labels[i] for i in subset],
            )
            right = _factorize(
                partial_trace_array(matrix, dims, list(subset)),
                [dims[i] for i in rest],
                [labels[i] for i in rest],
            )
            return left + right
    return [labels]


def factorize_product(rho: DensityMatrix) -> List[List[int]]:
    """
    Finest tensor-product block structure of a state

    Returns:
        Groups of factor indices with rho = (x)_g rho_g, ordered by first index
    """
    groups = _factorize(rho.matrix, list(rho.dims), list(range(rho.layout.size)))
    return sorted((sorted(g) for g in groups), key=lambda g: g[0])


def _block_verdict(
    matrix: np.ndarray,
    dims: Sequence[int],
    left: Sequence[int],
) -> Tuple[Verdict, float, str]:
    """Verdict for one product block straddling the cut"""
    value = ppt_min_eigenvalue_array(matrix, dims, left)
    if value < -settings.tolerances.ppt:
        return Verdict.ENTANGLED, value, "npt block"
    dim_left = int(np.prod([dims[i] for i in left]))
    dim_right = int(np.prod(dims)) // dim_left
    if is_ppt_decisive(dim_left, dim_right):
        return Verdict.SEPARABLE, value, "ppt-decisive block"
    block_purity = float(np.sum(np.abs(matrix) ** 2))
    if in_purity_ball(block_purity, dim_left * dim_right):
        return Verdict.SEPARABLE, value, "purity-ball block"
    return Verdict.INCONCLUSIVE, value, "ppt block beyond 2x3"


def _straddling_blocks(rho: DensityMatrix, b: Bipartition, groups: Sequence[Sequence[int]]):
    """(group, block matrix, block dims, left positions) for blocks the cut splits"""
    for group in groups:
        left, right = split_for_factors(b, rho.layout, group)
        if not left or not right:
            continue
        traced = [i for i in range(rho.layout.size) if i not in group]
        block = partial_trace_array(rho.matrix, rho.dims, traced)
        yield list(group), block, [rho.dims[i] for i in group], left


def product_negativity(
    rho: DensityMatrix,
    b: Bipartition,
    groups: Optional[Sequence[Sequence[int]]] = None,
) -> float:
    """
    Negativity across a cut computed block by block

    The trace norm of a partial transpose is multiplicative over tensor
    factors and equals one on blocks the cut does not split, so only the
    straddling blocks are decomposed.
    """
    check_cut(b, rho.layout)
    groups = factorize_product(rho) if groups is None else groups
    norm = 1.0
    for _, block, block_dims, left in _straddling_blocks(rho, b, groups):
        norm *= trace_norm(partial_transpose_array(block, block_dims, left))
    value = (norm - 1.0) / 2.0
    return value if value >= settings.tolerances.negativity_clip else 0.0


def certify_cut_separable(
    rho: DensityMatrix,
    b: Bipartition,
    groups: Optional[Sequence[Sequence[int]]] = None,
) -> CriterionVerdict:
    """
    Product-aware separability test across a cut

    Blocks on one side of the cut are separable by construction; every block
    straddling the cut must be certified on its own. An NPT straddling block
    makes the whole state NPT across the cut.

    Args:
        groups: product blocks from factorize_product, computed when omitted
    """
    check_cut(b, rho.layout)
    groups = factorize_product(rho) if groups is None else groups
    worst = 0.0
    verdict = Verdict.SEPARABLE
    notes = []

    for group, block, block_dims, left in _straddling_blocks(rho, b, groups):
        block_verdict, value, note = _block_verdict(block, block_dims, left)
        worst = min(worst, value)
        notes.append(f"{group}:{note}")
        if block_verdict == Verdict.ENTANGLED:
            verdict = Verdict.ENTANGLED
            break
        if block_verdict == Verdict.INCONCLUSIVE:
            verdict = Verdict.INCONCLUSIVE

    logger.debug("Product-aware cut check", cut=b.label, groups=groups, verdict=verdict.value)
    detail = "; ".join(notes) if notes else "product across cut"
    return CriterionVerdict(name="product", value=worst, verdict=verdict, cut=b, detail=detail)

