"""
Dense semidefinite programming over Hermitian blocks
"""
from .base import SdpBlock, SdpConstraint, SdpProblem, SdpSolution, SdpSolver, SdpStatus
from .interior_point import InteriorPointSolver
from .modeling import ProblemBuilder, hermitian_basis, transpose_index_map


def solve(problem: SdpProblem) -> SdpSolution:
    """Solve with the configured solver instance"""
    from ..dependencies import get_sdp_solver

    return get_sdp_solver().solve(problem)


__all__ = [
    "SdpBlock",
    "SdpConstraint",
    "SdpProblem",
    "SdpSolution",
    "SdpSolver",
    "SdpStatus",
    "InteriorPointSolver",
    "ProblemBuilder",
    "hermitian_basis",
    "transpose_index_map",
    "solve",
]
