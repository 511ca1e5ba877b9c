"""
Pair-entangled network states and multi-copy regrouping
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...core.config import settings
from ...core.exceptions import DimensionError, ValidationError
from ...core.logging import get_logger
from ...models.domain import DensityMatrix, Factor, PenGraph, SubsystemLayout
from ..tensor import check_dimension_cap, kron_all, permute_array
from .constructors import isotropic_matrix

logger = get_logger(__name__)


def _edge_matrix(state) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    return isotropic_matrix(state)


def party_major_order(factors: Sequence[Factor]) -> List[int]:
    """
    Factor order grouping each party's factors together

    Parties ascending, then copies ascending, then hub slots ascending.
    """
    def key(i: int) -> Tuple[int, int, int, int]:
        f = factors[i]
        return (f.party, f.copy, -1 if f.slot is None else f.slot, i)

    return sorted(range(len(factors)), key=key)


def pen_state(g: PenGraph) -> DensityMatrix:
    """
    Tensor product of edge states over the graph

    A vertex of degree d holds d qubit factors; when d >= 2 each factor is
    labeled with the slot of the neighbour it pairs with.
    """
    dim = 4 ** len(g.edges)
    check_dimension_cap(dim)

    factors: List[Factor] = []
    for i, j in g.edges:
        factors.append(Factor(2, party=i, slot=j if g.degree(i) > 1 else None))
        factors.append(Factor(2, party=j, slot=i if g.degree(j) > 1 else None))

    matrix = kron_all([_edge_matrix(s) for s in g.edge_states])
    perm = party_major_order(factors)
    dims = [f.dimension for f in factors]
    regrouped = permute_array(matrix, dims, perm)
    layout = SubsystemLayout(tuple(factors[i] for i in perm))
    return DensityMatrix(regrouped, layout)


def star_pen(n: int, p: float) -> DensityMatrix:
    """sigma_n(p): isotropic states from hub 1 to leaves 2..n"""
    if n < 3:
        raise ValidationError(f"Star PEN states need n >= 3, got {n}")
    if 4 ** (n - 1) > settings.dimension_cap:
        raise DimensionError(
            f"Star PEN state on {n} parties has dimension {4 ** (n - 1)} > cap {settings.dimension_cap}"
        )
    return pen_state(PenGraph.star(n, p))


def copies(rho: DensityMatrix, k: int) -> DensityMatrix:
    """
    rho^(x)k regrouped party-major

    Built copy-major, then permuted so that the factors of each party are
    adjacent (parties ascending, copies ascending).
    """
    if k < 1:
        raise ValidationError(f"Copy count must be >= 1, got {k}")
    if k == 1:
        return rho

    total = rho.dim ** k
    if total > settings.dimension_cap:
        raise DimensionError(f"{k} copies have dimension {total} > cap {settings.dimension_cap}")

    max_copy = max(f.copy for f in rho.layout.factors)
    factors: List[Factor] = []
    for j in range(1, k + 1):
        for f in rho.layout.factors:
            factors.append(Factor(f.dimension, f.party, (j - 1) * max_copy + f.copy, f.slot))

    matrix = kron_all([rho.matrix] * k)
    perm = sorted(range(len(factors)), key=lambda i: (factors[i].party, factors[i].copy, i))
    dims = [f.dimension for f in factors]
    logger.debug("Regrouping copies", k=k, dimension=total)
    return DensityMatrix(
        permute_array(matrix, dims, perm),
        SubsystemLayout(tuple(factors[i] for i in perm)),
    )


def edge_layout(k: int, hub: int = 1, leaf: int = 2, slot: Optional[int] = None) -> SubsystemLayout:
    """Layout of k copies of one edge: the hub stack then the leaf stack"""
    hub_factors = tuple(Factor(2, hub, copy=c, slot=slot) for c in range(1, k + 1))
    leaf_factors = tuple(Factor(2, leaf, copy=c) for c in range(1, k + 1))
    return SubsystemLayout(hub_factors + leaf_factors)


def identity_power(k: int, layout: Optional[SubsystemLayout] = None) -> DensityMatrix:
    """Normalized identity on k copies of one edge"""
    layout = layout or edge_layout(k)
    dim = layout.total_dimension
    check_dimension_cap(dim)
    return DensityMatrix(np.eye(dim, dtype=np.complex128) / dim, layout)


def edge_factors(layout: SubsystemLayout, hub: int, leaf: int) -> Tuple[List[int], List[int]]:
    """
    Factor indices carrying edge (hub, leaf) in a star layout

    Returns:
        (hub factor indices, leaf factor indices), both in layout order
    """
    hub_idx = [
        i for i, f in enumerate(layout.factors)
        if f.party == hub and (f.slot is None or f.slot == leaf)
    ]
    leaf_idx = [i for i, f in enumerate(layout.factors) if f.party == leaf]
    if not hub_idx or not leaf_idx:
        raise ValidationError(f"Layout has no factors for edge ({hub}, {leaf})")
    return hub_idx, leaf_idx
