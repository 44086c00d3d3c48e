"""
Dependency injection container for application services.
"""
from app.services.clifford_service import CliffordService
from app.services.dynamics_service import DynamicsService
from app.services.hamiltonian_service import HamiltonianService
from app.services.lie_algebra_service import LieAlgebraService
from app.services.report_service import ReportService


def get_clifford_service() -> CliffordService:
    """
    Get Clifford service instance (singleton).

    Returns:
        CliffordService: Clifford service instance
    """
    return CliffordService()


def get_hamiltonian_service() -> HamiltonianService:
    """
    Get Hamiltonian service instance with injected dependencies (singleton).

    Returns:
        HamiltonianService: Hamiltonian service instance
    """
    return HamiltonianService(clifford_service=get_clifford_service())


def get_dynamics_service() -> DynamicsService:
    """
    Get dynamics service instance with injected dependencies (singleton).

    Returns:
        DynamicsService: Dynamics service instance
    """
    return DynamicsService(hamiltonian_service=get_hamiltonian_service())


def get_lie_algebra_service() -> LieAlgebraService:
    """
    Get Lie-algebra service instance with injected dependencies (singleton).

    Returns:
        LieAlgebraService: Lie-algebra service instance
    """
    return LieAlgebraService(clifford_service=get_clifford_service())


def get_report_service() -> ReportService:
    """
    Get report service instance (singleton).

    Returns:
        ReportService: Report service instance
    """
    return ReportService()
