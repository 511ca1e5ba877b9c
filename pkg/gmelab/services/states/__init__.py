"""
Constructors for the state families and multi-copy regrouping
"""
from .constructors import (
    MAX_GHZ_PARTIES,
    bell,
    check_visibility,
    ghz,
    isotropic,
    isotropic_matrix,
    max_entangled_qubit,
    maximally_mixed,
    product_state,
    pure_state,
    random_density_matrix,
)
from .networks import (
    copies,
    edge_factors,
    edge_layout,
    identity_power,
    party_major_order,
    pen_state,
    star_pen,
)

__all__ = [
    "MAX_GHZ_PARTIES",
    "bell",
    "check_visibility",
    "ghz",
    "isotropic",
    "isotropic_matrix",
    "max_entangled_qubit",
    "maximally_mixed",
    "product_state",
    "pure_state",
    "random_density_matrix",
    "copies",
    "edge_factors",
    "edge_layout",
    "identity_power",
    "party_major_order",
    "pen_state",
    "star_pen",
]
