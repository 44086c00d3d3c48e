"""
Dispersion table E(|p|) of the `paper`, `dirac` and `pauli` models.
"""
import numpy as np

from app.commands import new_document
from app.constants import SPECTRUM_FILE, Command, HamiltonianKind, References
from app.core.logging import get_logger
from app.dependencies import get_hamiltonian_service, get_report_service
from app.models.config import RunConfig
from app.models.report import CheckResult, ReportDocument

logger = get_logger(__name__)

MOMENTUM_COLUMN = "p"


def run(config: RunConfig) -> ReportDocument:
    """
    Write the dispersion table and check it against the eigenvalues of each model.

    Args:
        config: Validated run configuration

    Returns:
        ReportDocument: Rest energies, monotonicity and eigenvalue agreement

    Raises:
        OutputError: If the table cannot be written
    """
    hamiltonian = get_hamiltonian_service()
    reports = get_report_service()
    k = config.constants()
    kinds = list(HamiltonianKind)

    p_abs = np.linspace(0.0, config.p_max, config.spectrum_points)
    table = {kind: hamiltonian.dispersion(kind, p_abs, k) for kind in kinds}
    momenta = np.zeros((p_abs.size, 3))
    momenta[:, 2] = p_abs

    checks = []
    rest = {
        HamiltonianKind.PAPER: k.rest_energy,
        HamiltonianKind.DIRAC: k.rest_energy,
        HamiltonianKind.PAULI: 0.0,
    }
    for kind in kinds:
        energies = table[kind]
        eigenvalues, _ = hamiltonian.batch_spectrum(kind, momenta, k)
        scale = np.maximum(np.abs(energies), k.rest_energy)
        agreement = float(np.max(np.abs(eigenvalues[:, 0] - energies) / scale))
        checks += [
            CheckResult.evaluate(
                f"{kind.value}.rest_energy",
                References.DISPERSION,
                abs(float(energies[0]) - rest[kind]),
                config.tolerance("tol_exact"),
            ),
            CheckResult.evaluate(
                f"{kind.value}.monotone",
                References.DISPERSION,
                max(0.0, float(-np.min(np.diff(energies)))),
                0.0,
            ),
            CheckResult.evaluate(
                f"{kind.value}.eigenvalue_agreement",
                References.DISPERSION,
                agreement,
                config.tolerance("tol_spectrum"),
                detail="largest eigenvalue of H(0, 0, p) against E(p)",
            ),
        ]

    path = reports.output_path(config.output_dir, SPECTRUM_FILE)
    rows = np.column_stack([p_abs] + [table[kind] for kind in kinds])
    reports.write_table(path, [MOMENTUM_COLUMN] + [kind.value for kind in kinds], rows.tolist())
    logger.info("Dispersion table with %d rows written to %s", p_abs.size, path)

    doc = new_document(Command.SPECTRUM, config)
    return doc.model_copy(
        update={
            "checks": checks,
            "values": {"rows": int(p_abs.size), "p_max": config.p_max},
            "outputs": [str(path)],
        }
    )
