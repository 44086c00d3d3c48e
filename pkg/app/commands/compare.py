"""
Side-by-side evolution of one packet under the `paper`, `dirac` and `pauli` models.
"""
from app.commands import new_document
from app.commands.zbw import analyse_model, packet
from app.constants import Command, HamiltonianKind, References
from app.core.logging import get_logger
from app.models.config import RunConfig
from app.models.report import CheckResult, ReportDocument

logger = get_logger(__name__)


def run(config: RunConfig) -> ReportDocument:
    """
    Evolve the configured packet under all three models on the same time grid.

    The per-model dynamics checks are those of the zbw command; on top of them each
    fitted drift is compared with the drift of the model's closed-form series, and
    the paper-model vs Dirac drift difference is reported.

    Args:
        config: Validated run configuration

    Returns:
        ReportDocument: Per-model checks plus the drift comparison
    """
    field = packet(config)
    runs = {kind: analyse_model(config, kind, field, Command.COMPARE) for kind in HamiltonianKind}

    checks = [check for r in runs.values() for check in r.checks]
    values = {key: value for r in runs.values() for key, value in r.values.items()}
    for kind, r in runs.items():
        checks.append(
            CheckResult.evaluate(
                f"{kind.value}.drift_matches_closed_form",
                References.TRAJECTORY,
                abs(r.analysis.drift_velocity - r.oracle.drift_velocity),
                config.tolerance("tol_ehrenfest"),
            )
        )

    paper = runs[HamiltonianKind.PAPER].analysis
    dirac = runs[HamiltonianKind.DIRAC].analysis
    checks.append(
        CheckResult.reported(
            "paper_vs_dirac_drift",
            References.PAULI,
            abs(paper.drift_velocity - dirac.drift_velocity),
            detail=f"paper {paper.drift_velocity:.6g}, dirac {dirac.drift_velocity:.6g} (units c)",
        )
    )
    if dirac.oscillation_frequency > 0:
        values["paper_dirac_frequency_ratio"] = (
            paper.oscillation_frequency / dirac.oscillation_frequency
        )
    logger.info(
        "Drift paper %.6g, dirac %.6g, pauli %.6g",
        paper.drift_velocity,
        dirac.drift_velocity,
        runs[HamiltonianKind.PAULI].analysis.drift_velocity,
    )

    doc = new_document(Command.COMPARE, config)
    return doc.model_copy(
        update={
            "checks": checks,
            "values": values,
            "outputs": [str(r.path) for r in runs.values()],
        }
    )
