"""
Phi(p, k) extraction and the key states built from it
"""
from typing import Optional

import numpy as np

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...models.domain import DensityMatrix, SubsystemLayout
from ..states import copies, edge_layout, isotropic
from ..tensor import check_dimension_cap
from .scalars import f_k, key_weight, mixing_ratio

# Below this f_k the extraction divides by noise
_MIN_WEIGHT = 1e-12


def _edge_target(layout: Optional[SubsystemLayout], k: int) -> SubsystemLayout:
    layout = layout or edge_layout(k)
    if layout.dimensions != (2,) * (2 * k):
        raise ValidationError(f"Edge layout must hold {2 * k} qubits, got {layout.dimensions}")
    return layout


def white_noise(k: int) -> np.ndarray:
    """(I/4)^(x)k"""
    d = 4 ** k
    return np.eye(d, dtype=np.complex128) / d


def phi_matrix(p: float, k: int) -> np.ndarray:
    f = f_k(p, k)
    if f <= _MIN_WEIGHT:
        raise ValidationError(f"f_k({p}, {k}) = {f:.3e} is too small to extract Phi")
    check_dimension_cap(4 ** k)
    powered = copies(isotropic(p), k).matrix
    return (powered - (1.0 - p) ** k * white_noise(k)) / f


def phi_extract(p: float, k: int, layout: Optional[SubsystemLayout] = None) -> DensityMatrix:
    """
    Phi(p, k) = [rho(p)^(x)k - (1-p)^k (I/4)^(x)k] / f_k(p)

    Laid out as the hub stack (k qubits) followed by the leaf stack.
    """
    return DensityMatrix(phi_matrix(p, k), _edge_target(layout, k))


def _mixture(phi: np.ndarray, weight: float, k: int, layout: Optional[SubsystemLayout]) -> DensityMatrix:
    return DensityMatrix(weight * phi + (1.0 - weight) * white_noise(k), _edge_target(layout, k))


def key_state(p: float, k: int, n: int, layout: Optional[SubsystemLayout] = None) -> DensityMatrix:
    """
    Normalization of (f_k(p)/(n-1)) Phi(p, k) + (1 - f_k(p)) (I/4)^(x)k

    Separable across hub stack | leaf stack exactly when the star
    construction goes through at p.
    """
    if n < 3:
        raise ValidationError(f"Key states need n >= 3, got {n}")
    return _mixture(phi_matrix(p, k), key_weight(p, k, n), k, layout)


def fixed_weight_mixture(
    p_hat: float,
    p_anchor: float,
    k: int,
    n: int,
    layout: Optional[SubsystemLayout] = None,
) -> DensityMatrix:
    """Phi(p_hat, k) mixed with white noise at the key-state weight of p_anchor"""
    if n < 3:
        raise ValidationError(f"Key states need n >= 3, got {n}")
    return _mixture(phi_matrix(p_hat, k), mixing_ratio(f_k(p_anchor, k), n - 1), k, layout)


def transport_weight(p_hat: float, p_anchor: float, k: int, n: int) -> float:
    """
    mu with key_state(p_hat) = mu I/d + (1 - mu) fixed_weight_mixture(p_hat, p_anchor)

    Requires p_hat <= p_anchor.
    """
    anchor = key_weight(p_anchor, k, n)
    target = key_weight(p_hat, k, n)
    if target > anchor + settings.tolerances.weight_order:
        raise ValidationError(f"p_hat {p_hat} exceeds the anchor {p_anchor}")
    return float(np.clip(1.0 - target / anchor, 0.0, 1.0))
