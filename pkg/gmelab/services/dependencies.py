"""
Dependency injection container and providers
"""
from typing import Optional

from ..core.logging import get_logger
from .sdp.base import SdpSolver
from .sdp.interior_point import InteriorPointSolver

logger = get_logger(__name__)

# Global service instances
_sdp_solver: Optional[SdpSolver] = None


def get_sdp_solver() -> SdpSolver:
    """Get SDP solver instance"""
    global _sdp_solver
    if _sdp_solver is None:
        _sdp_solver = InteriorPointSolver()
        logger.debug(f"Initialized {_sdp_solver.get_solver_name()}")
    return _sdp_solver


def set_sdp_solver(solver: SdpSolver) -> None:
    """Install a specific solver instance (tests, alternative backends)"""
    global _sdp_solver
    _sdp_solver = solver


def reset_services():
    """Reset all service instances (useful for testing)"""
    global _sdp_solver
    _sdp_solver = None
    logger.debug("All services reset")
