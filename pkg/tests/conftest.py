"""
Pytest configuration and fixtures
"""
from pathlib import Path

import numpy as np
import pytest

from gmelab.core.config import settings
from gmelab.models.domain import DensityMatrix, SubsystemLayout
from gmelab.services.dependencies import reset_services
from gmelab.services.states import bell, ghz
from gmelab.services.tensor import kron


@pytest.fixture(autouse=True)
def restore_settings():
    """Undo seed and tolerance changes made by a test"""
    tolerances = settings.tolerances.model_copy()
    seed, threads = settings.seed, settings.threads
    yield
    settings.tolerances = tolerances
    settings.seed, settings.threads = seed, threads
    reset_services()


@pytest.fixture
def temp_dir(tmp_path: Path) -> Path:
    """Create temporary directory for testing"""
    return tmp_path


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def bell_state() -> DensityMatrix:
    return bell()


@pytest.fixture
def ghz3() -> DensityMatrix:
    return ghz(3)


@pytest.fixture
def bell_times_zero() -> DensityMatrix:
    """phi+ on parties 1, 2 with |0><0| on party 3"""
    zero = np.diag([1.0, 0.0]).astype(np.complex128)
    return DensityMatrix(kron(bell().matrix, zero), SubsystemLayout.qubits(3))


@pytest.fixture
def random_hermitian(rng: np.random.Generator):
    """Factory for random Hermitian matrices"""
    def make(dim: int) -> np.ndarray:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        return (g + g.conj().T) / 2
    return make
