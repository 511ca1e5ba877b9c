"""
Scalar layer of the star-network construction: f_k, p0 and the mixing ratio
"""
import numpy as np
from scipy import optimize

from ...core.exceptions import NumericalError, ValidationError
from ...core.logging import get_logger

logger = get_logger(__name__)

ISOTROPIC_THRESHOLD = 1.0 / 3.0
# Allowed disagreement between the closed form and bisection
P0_AGREEMENT = 1e-10


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"{name} must lie in [0, 1], got {p}")
    return p


def _check_nk(n: int, k: int) -> None:
    if n < 3:
        raise ValidationError(f"Star networks need n >= 3 parties, got {n}")
    if k < 1:
        raise ValidationError(f"Copy count must be >= 1, got {k}")


def f_k(p: float, k: int) -> float:
    """Weight 1 - (1-p)^k of the non-white part of rho(p)^(x)k"""
    p = _check_probability(p)
    if k < 1:
        raise ValidationError(f"Copy count must be >= 1, got {k}")
    return 1.0 - (1.0 - p) ** k


def mixing_ratio(alpha: float, n: float) -> float:
    """(alpha/n) / ((alpha/n) + (1 - alpha))"""
    alpha = _check_probability(alpha, "alpha")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    share = alpha / n
    denominator = share + (1.0 - alpha)
    if denominator <= 0.0:
        raise ValidationError("Mixing ratio has a zero denominator")
    return share / denominator


def key_weight(p: float, k: int, n: int) -> float:
    """Normalized weight of Phi(p, k) inside the key state"""
    return mixing_ratio(f_k(p, k), n - 1)


def _p0_closed_form(n: int, k: int) -> float:
    white = (2.0 / 3.0) ** k
    return 1.0 - (white / (1.0 + (n - 2) * (1.0 - white))) ** (1.0 / k)


def p0_bisection(n: int, k: int) -> float:
    """Root of f/((n-1) - (n-2) f) = f_k(1/3) by bisection on [1/3, 1]"""
    _check_nk(n, k)
    anchor = f_k(ISOTROPIC_THRESHOLD, k)

    def gap(p: float) -> float:
        f = f_k(p, k)
        return f / ((n - 1) - (n - 2) * f) - anchor

    return float(optimize.bisect(gap, ISOTROPIC_THRESHOLD, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))


def p0(n: int, k: int) -> float:
    """
    Supremum of p with f_k(p) / ((n-1) - (n-2) f_k(p)) < f_k(1/3)

    Raises:
        NumericalError: closed form and bisection disagree
    """
    _check_nk(n, k)
    closed = _p0_closed_form(n, k)
    bisected = p0_bisection(n, k)
    if abs(closed - bisected) > P0_AGREEMENT:
        raise NumericalError(f"p0({n}, {k}): closed form {closed:.15g} vs bisection {bisected:.15g}")
    if not ISOTROPIC_THRESHOLD < closed < 1.0:
        raise NumericalError(f"p0({n}, {k}) = {closed:.15g} outside (1/3, 1)")
    return closed
