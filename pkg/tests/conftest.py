"""
Shared fixtures: fresh services per test and small run configurations.
"""
import pytest

from app.core.singleton import Singleton
from app.dependencies import (
    get_clifford_service,
    get_dynamics_service,
    get_hamiltonian_service,
    get_lie_algebra_service,
    get_report_service,
)
from app.models.config import RunConfig

# 1D grid small enough for unit tests: 12.7 Zitterbewegung periods, box of +-402
SMALL_DYNAMICS = {
    "n_points": 512,
    "p_max": 2.0,
    "sigma_p": 0.05,
    "t_max": 40.0,
    "samples": 512,
}


@pytest.fixture(autouse=True)
def reset_singletons():
    Singleton.reset()
    yield
    Singleton.reset()


@pytest.fixture
def clifford():
    return get_clifford_service()


@pytest.fixture
def hamiltonian():
    return get_hamiltonian_service()


@pytest.fixture
def dynamics():
    return get_dynamics_service()


@pytest.fixture
def lie():
    return get_lie_algebra_service()


@pytest.fixture
def reports():
    return get_report_service()


@pytest.fixture
def small_config(tmp_path) -> RunConfig:
    """Configuration of the small 1D experiment writing into a temporary directory."""
    return RunConfig(output_dir=str(tmp_path), **SMALL_DYNAMICS)
