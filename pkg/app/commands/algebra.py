"""
Identity suite of the Dirac algebra and the spin-1/2 Hamiltonian over seeded random momenta.
"""
from typing import Dict, Iterable, List, Tuple

import numpy as np

from app.commands import new_document, random_momenta
from app.constants import (
    GRADIENT_BATCH,
    ORACLE_BATCH,
    ORACLE_MOMENTUM_RADIUS,
    ORACLE_T_MAX,
    Adjudications,
    Command,
    References,
)
from app.core.logging import get_logger
from app.dependencies import get_clifford_service, get_hamiltonian_service
from app.models.config import RunConfig
from app.models.report import CheckResult, ReportDocument

logger = get_logger(__name__)

# momentum (units of m0 c) at which the printed energy is compared with the exact one
PRINTED_ENERGY_MOMENTUM: Tuple[float, float, float] = (1.0, 0.0, 0.0)


def _worst(residuals: Iterable[float]) -> float:
    return max(residuals, default=0.0)


def _relation_group(
    name: str,
    reference: str,
    residuals: Dict[str, float],
    prefixes: Tuple[str, ...],
    tolerance: float,
) -> CheckResult:
    selected = {key: value for key, value in residuals.items() if key.startswith(prefixes)}
    worst = max(selected, key=selected.__getitem__)
    return CheckResult.evaluate(
        name,
        reference,
        selected[worst],
        tolerance,
        detail=f"{len(selected)} relations, worst {worst}",
    )


def clifford_checks(config: RunConfig) -> List[CheckResult]:
    """Defining relations of the representation, grouped by family."""
    residuals = get_clifford_service().clifford_residuals()
    tol = config.tolerance("tol_exact")
    return [
        _relation_group("clifford_relations", References.CLIFFORD, residuals, ("clifford_",), tol),
        _relation_group("gamma5_relations", References.GAMMA5, residuals, ("gamma5_",), tol),
        _relation_group(
            "alpha_beta_relations", References.CLIFFORD, residuals, ("alpha", "beta_"), tol
        ),
        _relation_group("gamma_factor", References.GAMMA_FACTOR, residuals, ("Gamma_",), tol),
        _relation_group(
            "basis_orthogonality", References.CLIFFORD, residuals, ("trace_",), tol
        ),
    ]


def run(config: RunConfig) -> ReportDocument:
    """
    Run the algebraic identity suite.

    Args:
        config: Validated run configuration

    Returns:
        ReportDocument: One check per identity, plus the printed-formula adjudications
    """
    clifford = get_clifford_service()
    hamiltonian = get_hamiltonian_service()
    k = config.constants()
    rng = config.rng()
    scale = k.m0 * k.c
    batch = random_momenta(rng, config.p_batch, config.p_batch_radius * scale)
    oracle_p = random_momenta(rng, ORACLE_BATCH, ORACLE_MOMENTUM_RADIUS * scale)
    oracle_t = rng.uniform(0.0, ORACLE_T_MAX, size=ORACLE_BATCH) * k.compton_time
    p_ref = np.array(PRINTED_ENERGY_MOMENTUM) * scale
    time_step = config.fd_time_step * k.compton_time
    logger.info("Algebra suite: %d random momenta, %d oracle points", len(batch), ORACLE_BATCH)

    checks = clifford_checks(config)

    alpha_dot = _worst(
        float(np.max(np.abs(clifford.alpha_dot(p) @ clifford.alpha_dot(p) - (p @ p) * np.eye(4))))
        for p in batch
    )
    checks.append(
        CheckResult.evaluate(
            "alpha_dot_p_squared",
            References.HAMILTONIAN,
            alpha_dot,
            config.tolerance("tol_identity"),
        )
    )
    checks.append(
        CheckResult.evaluate(
            "hamiltonian_hermitian",
            References.HAMILTONIAN,
            _worst(hamiltonian.hermiticity_residual(p, k) for p in batch),
            config.tolerance("tol_exact"),
        )
    )
    checks.append(
        CheckResult.evaluate(
            "hamiltonian_square",
            References.SQUARE,
            _worst(hamiltonian.square_residual(p, k) for p in batch),
            config.tolerance("tol_identity"),
        )
    )

    spectral: Dict[str, List[float]] = {
        "eigenvalue": [], "orthonormality": [], "reconstruction": [], "projector": []
    }
    for p in batch:
        residual = hamiltonian.spectrum_residual(p, k)
        residual["reconstruction"] /= hamiltonian.energy(p, k)
        for key in spectral:
            spectral[key].append(residual[key])
    for key, reference, tol_key in (
        ("eigenvalue", References.DISPERSION, "tol_spectrum"),
        ("orthonormality", References.DISPERSION, "tol_identity"),
        ("reconstruction", References.DISPERSION, "tol_spectrum"),
        ("projector", References.DISPERSION, "tol_identity"),
    ):
        checks.append(
            CheckResult.evaluate(
                f"spectrum_{key}", reference, _worst(spectral[key]), config.tolerance(tol_key)
            )
        )

    checks.append(
        CheckResult.evaluate(
            "velocity_gradient",
            References.VELOCITY,
            _worst(
                hamiltonian.velocity_gradient_residual(p, k, config.fd_momentum_step * scale)
                for p in batch[:GRADIENT_BATCH]
            ),
            config.tolerance("tol_gradient"),
        )
    )

    identities = [hamiltonian.anticommutator_identity(p, k) for p in batch]
    checks.append(
        CheckResult.evaluate(
            "anticommutator_exact_energy",
            References.ANTICOMMUTATOR,
            _worst(i.residual_exact for i in identities),
            config.tolerance("tol_anticomm"),
            detail="E = sqrt(H^2) = m0 c^2 + p^2/2m0",
        )
    )
    printed = hamiltonian.anticommutator_identity(p_ref, k)
    checks.append(
        CheckResult.reported(
            "anticommutator_printed_energy",
            References.ANTICOMMUTATOR,
            printed.residual_paper,
            detail="E = sqrt(c^2 p^2 + m0^2 c^4) at p = (1, 0, 0) m0 c",
        )
    )
    logger.warning(
        "Printed energy in the velocity anticommutator misses by %.6g at p = (1, 0, 0)",
        printed.residual_paper,
    )

    checks.append(
        CheckResult.evaluate(
            "eta_anticommutes_hamiltonian",
            References.ETA,
            _worst(hamiltonian.eta_anticommutator_residual(p, k) for p in batch),
            config.tolerance("tol_eta"),
        )
    )
    checks.append(
        CheckResult.evaluate(
            "eta_evolution",
            References.ETA_EVOLUTION,
            _worst(
                hamiltonian.eta_evolution_residual(p, k, t) for p, t in zip(oracle_p, oracle_t)
            ),
            config.tolerance("tol_eta"),
            detail="exp(2iHt/hbar) eta(0) against U^dagger eta U",
        )
    )
    checks.append(
        CheckResult.evaluate(
            "velocity_derivative",
            References.VELOCITY_DERIVATIVE,
            _worst(hamiltonian.velocity_derivative_identity(p, k) for p in batch),
            config.tolerance("tol_anticomm"),
        )
    )
    checks.append(
        CheckResult.evaluate(
            "trajectory_derivative",
            References.TRAJECTORY,
            _worst(
                hamiltonian.trajectory_derivative_residual(p, k, t, time_step)
                for p, t in zip(oracle_p, oracle_t)
            ),
            config.tolerance("tol_trajectory"),
            detail="corrected closed form, fourth-order stencil",
        )
    )
    literal_residual = hamiltonian.trajectory_derivative_residual(
        p_ref, k, 0.0, time_step, literal=True
    )
    literal_origin = float(
        np.max(np.abs(np.stack(hamiltonian.trajectory_paper_literal(p_ref, k, 0.0).components)))
    )
    checks.append(
        CheckResult.reported(
            "trajectory_printed_derivative",
            References.TRAJECTORY,
            literal_residual,
            detail=f"printed expression at t = 0, p = (1, 0, 0) m0 c; value {literal_origin:.6g}",
        )
    )
    logger.warning("Printed trajectory misses the Heisenberg velocity by %.6g", literal_residual)

    for name, residual in hamiltonian.rest_frame_limits(k).items():
        checks.append(
            CheckResult.evaluate(
                name, References.REST_FRAME, residual, config.tolerance("tol_identity")
            )
        )

    doc = new_document(Command.ALGEBRA, config)
    phase = clifford.gamma5_product_phase()
    doc = doc.model_copy(
        update={
            "checks": checks,
            "values": {
                "p_batch": len(batch),
                "gamma5_product_phase_real": float(phase.real),
                "gamma5_product_phase_imag": float(phase.imag),
                "anticommutator_printed_residual": printed.residual_paper,
                "trajectory_printed_value_t0": literal_origin,
            },
            "notes": [Adjudications.GAMMA5_PHASE, Adjudications.OQ1, Adjudications.OQ2],
        }
    )
    for check in checks:
        logger.debug("%s: residual %.3e (%s)", check.name, check.residual, check.status.value)
    logger.info("Algebra suite: %d checks, %d failed", len(checks), len(doc.failed_checks))
    return doc
