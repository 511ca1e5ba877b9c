"""
Cheap spectral separability and entanglement tests
"""
from .products import certify_cut_separable, factorize_product, product_negativity
from .spectral import (
    PPT_DECISIVE_DIMENSION,
    gb_ball_separable,
    in_purity_ball,
    is_ppt_decisive,
    negativity,
    negativity_array,
    negativity_verdict,
    ppt_min_eig,
    ppt_min_eigenvalue_array,
    projector_fidelity,
)

__all__ = [
    "PPT_DECISIVE_DIMENSION",
    "certify_cut_separable",
    "factorize_product",
    "gb_ball_separable",
    "in_purity_ball",
    "is_ppt_decisive",
    "negativity",
    "negativity_array",
    "negativity_verdict",
    "ppt_min_eig",
    "ppt_min_eigenvalue_array",
    "product_negativity",
    "projector_fidelity",
]
