"""
Application configuration settings
"""
from typing import Any, Dict, Mapping

from pydantic import BaseModel, Field, ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings

from .exceptions import ConfigurationError


class Tolerances(BaseModel):
    """Every numeric threshold used by the toolkit"""

    # Density matrices
    hermitian: float = 1e-12
    hermitian_input: float = 1e-10  # precondition of hermitian_eig / trace_norm
    trace: float = 1e-10
    psd: float = 1e-10
    purity_rank_one: float = 1e-10
    fidelity_imaginary: float = 1e-12

    # Eigensolver
    jacobi_offdiag: float = 1e-13
    jacobi_max_sweeps: int = 100
    eig_reconstruction: float = 1e-9

    # Spectral criteria
    ppt: float = 1e-10
    negativity_clip: float = 1e-12
    gb_ball: float = 1e-14
    product_structure: float = 1e-12
    npt_activatable: float = 1e-8

    # Separability evidence and key-state transport
    unit_norm: float = 1e-9
    weight_order: float = 1e-15

    # SDP
    sdp_feasibility: float = 1e-7
    sdp_gap: float = 1e-7
    sdp_regularization: float = 1e-12

    # Witnesses and distance bounds
    witness_violation: float = 1e-6
    witness_decomposition: float = 1e-6
    witness_psd: float = 1e-7
    sum_margin: float = 1e-6
    bound_order: float = 1e-6
    gilbert: float = 1e-6

    # Certificates
    certificate_weights: float = 1e-10
    certificate_psd: float = 1e-9
    certificate_residual: float = 1e-9
    certificate_product: float = 1e-10


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    # Runtime
    debug: bool = False
    log_json: bool = False
    threads: int = 4  # GMELAB_THREADS
    seed: int = 0

    # Dense algebra caps
    dimension_cap: int = 256
    sdp_dimension_cap: int = 64
    max_sweep_points: int = 10_000

    # Interior point solver
    sdp_max_iterations: int = 200
    sdp_step_fraction: float = 0.98

    # Gilbert
    gilbert_max_iterations: int = 10_000
    gilbert_restarts: int = 5
    gilbert_alternations: int = 25
    gilbert_correction_interval: int = 25
    gilbert_patience: int = 2_000

    # Activation pipeline
    p_hat_grid_points: int = 64
    evidence_target_distance: float = 1e-3
    evidence_min_distance: float = 1e-4

    tolerances: Tolerances = Field(default_factory=Tolerances)

    class Config:
        env_prefix = "GMELAB_"
        env_file = ".env"
        env_nested_delimiter = "__"
        case_sensitive = False


def tolerance_snapshot() -> Dict[str, Any]:
    """Current tolerances as a plain dict (embedded in every report)"""
    return settings.tolerances.model_dump()


def apply_tolerance_overrides(overrides: Mapping[str, float]) -> Tolerances:
    """
    Validate and apply tolerance overrides to the live settings object

    Args:
        overrides: field name -> new value

    Returns:
        The tolerances now in force
    """
    unknown = sorted(set(overrides) - set(Tolerances.model_fields))
    if unknown:
        raise ConfigurationError(f"Unknown tolerance(s): {', '.join(unknown)}")

    merged = {**settings.tolerances.model_dump(), **overrides}
    try:
        settings.tolerances = Tolerances(**merged)
    except PydanticValidationError as e:
        raise ConfigurationError(f"Invalid tolerance override: {e}") from e
    return settings.tolerances


# Global settings instance
settings = Settings()
