"""
Gilbert's algorithm: approximate a bipartite state by a mixture of product states

The iterate sigma_t always lies in the convex hull of pure product states,
so ||rho - sigma_t|| gives an upper bound on the distance to the separable set.
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import optimize

from ...core.config import settings
from ...core.exceptions import ValidationError
from ...core.logging import get_logger
from ...models.certificates import GilbertResult, ProductMixture
from ...models.domain import Bipartition, DensityMatrix
from ..partitions import check_cut
from ..tensor import permute_array, trace_norm

logger = get_logger(__name__)

# Weight of the sum-to-one row in the corrective least squares
_SIMPLEX_WEIGHT = 1e3


@dataclass
class GilbertOptions:
    """Iteration limits; None means the configured default"""
    max_iterations: Optional[int] = None
    tolerance: Optional[float] = None
    restarts: Optional[int] = None
    alternations: Optional[int] = None
    correction_interval: Optional[int] = None
    patience: Optional[int] = None
    seed: Optional[int] = None

    def resolved(self) -> "GilbertOptions":
        return GilbertOptions(
            max_iterations=self.max_iterations or settings.gilbert_max_iterations,
            tolerance=self.tolerance or settings.tolerances.gilbert,
            restarts=self.restarts or settings.gilbert_restarts,
            alternations=self.alternations or settings.gilbert_alternations,
            correction_interval=self.correction_interval or settings.gilbert_correction_interval,
            patience=self.patience or settings.gilbert_patience,
            seed=settings.seed if self.seed is None else self.seed,
        )


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _top_vector(m: np.ndarray) -> Tuple[float, np.ndarray]:
    values, vectors = np.linalg.eigh((m + m.conj().T) / 2)
    return float(values[-1]), vectors[:, -1]


class GilbertApproximator:
    """
    Frank-Wolfe style approximation of rho by product mixtures

    Args:
        matrix: state ordered as (left (x) right)
        dim_left: dimension of the left side
        dim_right: dimension of the right side
        options: iteration limits
    """

    def __init__(self, matrix: np.ndarray, dim_left: int, dim_right: int, options: Optional[GilbertOptions] = None):
        self.rho = np.asarray(matrix, dtype=np.complex128)
        self.dim_left = dim_left
        self.dim_right = dim_right
        self.dim = dim_left * dim_right
        if self.rho.shape != (self.dim, self.dim):
            raise ValidationError(f"State shape {self.rho.shape} does not match {dim_left}x{dim_right}")
        self.options = (options or GilbertOptions()).resolved()
        self.rng = np.random.default_rng(self.options.seed)

    def _oracle(self, delta: np.ndarray, warm: Optional[np.ndarray]) -> Tuple[float, np.ndarray, np.ndarray]:
        """Alternating maximization of <a b| delta |a b>"""
        da, db = self.dim_left, self.dim_right
        d4 = delta.reshape(da, db, da, db)
        starts = []
        if warm is not None:
            starts.append(warm)
        for _ in range(self.options.restarts):
            starts.append(_unit(self.rng.standard_normal(db) + 1j * self.rng.standard_normal(db)))

        best = (-np.inf, None, None)
        for b in starts:
            value = -np.inf
            a = None
            for _ in range(self.options.alternations):
                m_a = np.einsum("ikjl,k,l->ij", d4, b.conj(), b)
                _, a = _top_vector(m_a)
                m_b = np.einsum("ikjl,i,j->kl", d4, a.conj(), a)
                new_value, b = _top_vector(m_b)
                if new_value - value <= 1e-14 * max(1.0, abs(new_value)):
                    value = new_value
                    break
                value = new_value
            if value > best[0]:
                best = (value, a, b)
        return best

    def _correct(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Fully corrective reweighting: nonnegative least squares on the simplex"""
        atoms = np.einsum("ka,kb->kab", left, right).reshape(left.shape[0], -1)
        columns = np.einsum("ki,kj->kij", atoms, atoms.conj()).reshape(atoms.shape[0], -1).T
        target = self.rho.ravel()
        a = np.vstack([columns.real, columns.imag, _SIMPLEX_WEIGHT * np.ones((1, columns.shape[1]))])
        rhs = np.concatenate([target.real, target.imag, [_SIMPLEX_WEIGHT]])
        weights, _ = optimize.nnls(a, rhs, maxiter=50 * a.shape[1])
        total = weights.sum()
        return weights / total if total > 0 else weights

    def run(self) -> GilbertResult:
        opts = self.options
        da, db = self.dim_left, self.dim_right

        # sigma_0 = I/d as the product basis
        left = np.repeat(np.eye(da, dtype=np.complex128), db, axis=0)
        right = np.tile(np.eye(db, dtype=np.complex128), (da, 1))
        weights = np.full(self.dim, 1.0 / self.dim)
        sigma = np.eye(self.dim, dtype=np.complex128) / self.dim

        distance = float(np.linalg.norm(self.rho - sigma))
        best_distance = distance
        stalled = 0
        warm = None
        iteration = 0
        converged = distance < opts.tolerance

        while not converged and iteration < opts.max_iterations:
            iteration += 1
            delta = self.rho - sigma
            value, a, b = self._oracle(delta, warm)
            warm = b
            atom = np.kron(a, b)
            projector = np.outer(atom, atom.conj())
            direction = projector - sigma
            denom = float(np.sum(np.abs(direction) ** 2))
            gain = value - float(np.real(np.sum(delta * sigma.conj())))
            step = 0.0 if denom <= 0 else min(1.0, max(0.0, gain / denom))

            if step > 0:
                weights = np.append((1.0 - step) * weights, step)
                left = np.vstack([left, a[None, :]])
                right = np.vstack([right, b[None, :]])
                sigma = (1.0 - step) * sigma + step * projector

            if iteration % opts.correction_interval == 0:
                corrected = self._correct(left, right)
                keep = corrected > 0
                if np.any(keep):
                    trial = ProductMixture(corrected[keep], left[keep], right[keep]).matrix()
                    if np.linalg.norm(self.rho - trial) < np.linalg.norm(self.rho - sigma):
                        weights, left, right, sigma = corrected[keep], left[keep], right[keep], trial

            distance = float(np.linalg.norm(self.rho - sigma))
            converged = distance < opts.tolerance
            if distance < best_distance * (1.0 - 1e-9):
                best_distance = distance
                stalled = 0
            else:
                stalled += 1
                if stalled >= opts.patience:
                    logger.warning("Gilbert stalled", iteration=iteration, distance=distance)
                    break

            if iteration % 500 == 0:
                logger.debug("Gilbert progress", iteration=iteration, distance=distance, atoms=weights.size)

        weights = np.clip(weights, 0.0, None)
        weights = weights / weights.sum()
        mixture = ProductMixture(weights, left, right)
        sigma = mixture.matrix()
        distance = float(np.linalg.norm(self.rho - sigma))
        diff = self.rho - sigma
        upper = min(np.sqrt(self.dim) * distance, trace_norm((diff + diff.conj().T) / 2)) / 2.0

        capped = not converged and iteration >= opts.max_iterations
        return GilbertResult(
            mixture=mixture,
            frobenius_distance=distance,
            upper_bound=min(upper, 1.0),
            iterations=iteration,
            converged=distance < opts.tolerance,
            capped=capped,
        )


def split_order(rho: DensityMatrix, left: Sequence[int], right: Sequence[int]) -> Tuple[np.ndarray, int, int]:
    """rho reordered as (left (x) right) with the two side dimensions"""
    order = list(left) + list(right)
    if sorted(order) != list(range(rho.layout.size)):
        raise ValidationError("Split must cover every factor exactly once")
    matrix = permute_array(rho.matrix, rho.dims, order)
    return matrix, rho.layout.dimension_of(left), rho.layout.dimension_of(right)


def gilbert_upper_bound(
    rho: DensityMatrix,
    b: Bipartition,
    options: Optional[GilbertOptions] = None,
) -> GilbertResult:
    """
    Constructive upper bound on half the trace distance to the cut-separable set

    Reaching the iteration cap is reported through GilbertResult.capped.
    """
    left, right = check_cut(b, rho.layout)
    matrix, da, db = split_order(rho, left, right)
    result = GilbertApproximator(matrix, da, db, options).run()
    logger.info(
        "Gilbert finished",
        cut=b.label,
        distance=result.frobenius_distance,
        upper=result.upper_bound,
        iterations=result.iterations,
    )
    return result
