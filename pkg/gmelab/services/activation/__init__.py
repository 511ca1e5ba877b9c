"""
Star-network activation construction: scalars, key states, p_hat search and certificates
"""
from .certificate import build_biseparable_certificate, target_state, term_matrix, verify_certificate
from .extraction import fixed_weight_mixture, key_state, phi_extract, transport_weight, white_noise
from .pipeline import run_activation
from .scalars import ISOTROPIC_THRESHOLD, f_k, key_weight, mixing_ratio, p0, p0_bisection
from .search import ANCHORS, find_p_hat, p_hat_grid

__all__ = [
    "build_biseparable_certificate",
    "target_state",
    "term_matrix",
    "verify_certificate",
    "fixed_weight_mixture",
    "key_state",
    "phi_extract",
    "transport_weight",
    "white_noise",
    "run_activation",
    "ISOTROPIC_THRESHOLD",
    "f_k",
    "key_weight",
    "mixing_ratio",
    "p0",
    "p0_bisection",
    "ANCHORS",
    "find_p_hat",
    "p_hat_grid",
]
