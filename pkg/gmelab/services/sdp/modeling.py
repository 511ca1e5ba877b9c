"""
Small modeling layer: blocks, objectives and Hermitian matrix equalities
"""
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from ...core.exceptions import ValidationError
from ..tensor import partial_transpose_array
from .base import Coefficient, SdpBlock, SdpConstraint, SdpProblem

# (block index, scale, optional (dims, transposed factor indices))
LinearTerm = Tuple[int, float, Optional[Tuple[Sequence[int], Sequence[int]]]]


def transpose_index_map(dims: Sequence[int], factors: Sequence[int]) -> np.ndarray:
    """
    pos[p * d + q] = flat index of entry (p, q) after partial transposition
    """
    d = int(np.prod(dims))
    flat = np.arange(d * d, dtype=np.int64).reshape(d, d)
    moved = partial_transpose_array(flat, dims, factors)
    pos = np.empty(d * d, dtype=np.int64)
    pos[moved.ravel()] = np.arange(d * d, dtype=np.int64)
    return pos


def hermitian_basis(d: int, is_complex: bool) -> List[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    Basis of Hermitian (or real symmetric) d x d matrices as sparse triplets

    Diagonal units, E_pq + E_qp and, for complex matrices, i(E_pq - E_qp).
    """
    basis = []
    for p in range(d):
        basis.append((np.array([p]), np.array([p]), np.array([1.0 + 0j])))
    for p in range(d):
        for q in range(p + 1, d):
            basis.append((np.array([p, q]), np.array([q, p]), np.array([1.0 + 0j, 1.0 + 0j])))
            if is_complex:
                basis.append((np.array([p, q]), np.array([q, p]), np.array([1j, -1j])))
    return basis


class ProblemBuilder:
    """Accumulates blocks and constraints, then freezes them into an SdpProblem"""

    def __init__(self, name: str = "sdp"):
        self.name = name
        self._blocks: List[SdpBlock] = []
        self._objective: List[Optional[Coefficient]] = []
        self._constraints: List[SdpConstraint] = []

    def add_block(self, dim: int, is_complex: bool = True, name: str = "") -> int:
        self._blocks.append(SdpBlock(dim=dim, is_complex=is_complex, name=name))
        self._objective.append(None)
        return len(self._blocks) - 1

    def set_objective(self, block: int, coefficient: Coefficient) -> None:
        self._objective[block] = coefficient

    def add_constraint(self, coefficients: Dict[int, Coefficient], rhs: float) -> None:
        self._constraints.append(SdpConstraint(coefficients=dict(coefficients), rhs=float(rhs)))

    def add_trace_constraint(self, block: int, rhs: float) -> None:
        d = self._blocks[block].dim
        self.add_constraint({block: sparse.identity(d, dtype=np.complex128, format="coo")}, rhs)

    def add_hermitian_equality(self, terms: Sequence[LinearTerm], rhs: np.ndarray) -> int:
        """
        Constrain sum_k scale_k * T_k(X_k) = rhs entrywise

        T_k is the identity or a partial transpose; one real constraint per
        Hermitian basis element, so the equality holds as matrices.

        Returns:
            Number of constraints added
        """
        rhs = np.asarray(rhs, dtype=np.complex128)
        d = rhs.shape[0]
        blocks = [self._blocks[k] for k, _, _ in terms]
        if any(b.dim != d for b in blocks):
            raise ValidationError("Matrix equality terms must share the right-hand side dimension")
        is_complex = any(b.is_complex for b in blocks)

        maps = []
        for _, _, transpose in terms:
            maps.append(None if transpose is None else transpose_index_map(*transpose))

        count = 0
        for rows, cols, vals in hermitian_basis(d, is_complex):
            # Re Tr(H rhs) = sum H_pq rhs_qp
            value = float(np.real(np.sum(vals * rhs[cols, rows])))
            coefficients: Dict[int, Tuple[List, List, List]] = {}
            for (block, scale, _), pos in zip(terms, maps):
                if pos is None:
                    r, c = rows, cols
                else:
                    flat = pos[rows * d + cols]
                    r, c = flat // d, flat % d
                acc = coefficients.setdefault(block, ([], [], []))
                acc[0].append(r)
                acc[1].append(c)
                acc[2].append(scale * vals)
            self.add_constraint(
                {
                    block: sparse.coo_matrix(
                        (np.concatenate(v), (np.concatenate(r), np.concatenate(c))),
                        shape=(d, d),
                    )
                    for block, (r, c, v) in coefficients.items()
                },
                value,
            )
            count += 1
        return count

    def build(self) -> SdpProblem:
        return SdpProblem(
            blocks=tuple(self._blocks),
            objective=tuple(self._objective),
            constraints=tuple(self._constraints),
            name=self.name,
        )
