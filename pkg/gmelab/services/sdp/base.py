"""
Base interface and data types for SDP solvers
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
from scipy import sparse

from ...core.exceptions import SolverError, ValidationError

Coefficient = Union[np.ndarray, sparse.spmatrix]


class SdpStatus(str, Enum):
    """Solver outcome"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    MAX_ITERATIONS = "max-iterations"


@dataclass(frozen=True)
class SdpBlock:
    """One PSD block; complex blocks are Hermitian, real blocks symmetric"""
    dim: int
    is_complex: bool = True
    name: str = ""

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValidationError(f"Block dimension must be >= 1, got {self.dim}")

    @property
    def real_dim(self) -> int:
        """Dimension of the real symmetric block the solver works with"""
        return 2 * self.dim if self.is_complex else self.dim


@dataclass(frozen=True)
class SdpConstraint:
    """sum_b Re Tr(A_b X_b) = rhs"""
    coefficients: Mapping[int, Coefficient]
    rhs: float


@dataclass(frozen=True)
class SdpProblem:
    """
    minimize sum_b Re Tr(C_b X_b)
    subject to constraints, X_b PSD

    Attributes:
        blocks: block shapes
        objective: one coefficient per block (None means zero)
        constraints: linear equality constraints
    """
    blocks: Tuple[SdpBlock, ...]
    objective: Tuple[Optional[Coefficient], ...]
    constraints: Tuple[SdpConstraint, ...]
    name: str = "sdp"

    def __post_init__(self) -> None:
        if not self.blocks:
            raise ValidationError("SDP needs at least one block")
        if len(self.objective) != len(self.blocks):
            raise ValidationError("One objective coefficient is required per block")
        for i, con in enumerate(self.constraints):
            for b in con.coefficients:
                if not 0 <= b < len(self.blocks):
                    raise ValidationError(f"Constraint {i} references unknown block {b}")

    @property
    def constraint_count(self) -> int:
        return len(self.constraints)

    @property
    def parameter_count(self) -> int:
        """Number of real parameters of the primal variable"""
        total = 0
        for blk in self.blocks:
            n = blk.dim
            total += n * n if blk.is_complex else n * (n + 1) // 2
        return total


@dataclass
class SdpSolution:
    """
    Solver output with certified residuals

    Attributes:
        primal_blocks: PSD primal matrices (complex for complex blocks)
        dual: multipliers y, one per constraint
        dual_slack: Z_b = C_b - sum_i y_i A_ib
        primal_objective: sum_b Re Tr(C_b X_b)
        dual_objective: b^T y
        gap: relative duality gap
        primal_residual: relative primal infeasibility
        dual_residual: relative dual infeasibility
        status: optimal / infeasible / max-iterations
        iterations: interior point iterations used
        diagnostics: one record per iteration
    """
    primal_blocks: List[np.ndarray]
    dual: np.ndarray
    dual_slack: List[np.ndarray]
    primal_objective: float
    dual_objective: float
    gap: float
    primal_residual: float
    dual_residual: float
    status: SdpStatus
    iterations: int
    diagnostics: List[Dict[str, float]] = field(default_factory=list)

    @property
    def is_optimal(self) -> bool:
        return self.status == SdpStatus.OPTIMAL

    def summary(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
        }

    def require_optimal(self, context: str = "SDP") -> "SdpSolution":
        if not self.is_optimal:
            raise SolverError(
                f"{context} finished with status {self.status.value} "
                f"(gap {self.gap:.2e}, residuals {self.primal_residual:.2e}/{self.dual_residual:.2e})",
                solution=self,
            )
        return self


class SdpSolver(ABC):
    """
    Abstract base class for SDP solvers
    """

    @abstractmethod
    def solve(self, problem: SdpProblem) -> SdpSolution:
        """
        Solve a block SDP in primal standard form

        Args:
            problem: well-formed SdpProblem

        Returns:
            SdpSolution; breakdown is reported through its status
        """
        pass

    @abstractmethod
    def get_solver_name(self) -> str:
        """Get human-readable solver name"""
        pass
