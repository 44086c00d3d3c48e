"""
Rest-frame dynamical symmetry: closure, Jacobi identity and Killing signature of
the fifteen rest-frame operators against the canonical so(4,2) oracle.
"""
from typing import Dict

from app.commands import new_document
from app.constants import SO42_DIMENSION, Adjudications, Command, References
from app.core.logging import get_logger
from app.dependencies import get_lie_algebra_service
from app.models.config import RunConfig
from app.models.report import CheckResult, ReportDocument, ReportValue

logger = get_logger(__name__)


def _signature(signature) -> str:
    return ",".join(str(n) for n in signature)


def run(config: RunConfig) -> ReportDocument:
    """
    Run generators -> closure -> Jacobi -> Killing -> oracle identification.

    Args:
        config: Validated run configuration (drop_generator, paper_literal_spin, tolerances)

    Returns:
        ReportDocument: Lie-algebra checks, the real-form table and the notes

    Raises:
        ConfigError: If drop_generator names no generator or family
    """
    service = get_lie_algebra_service()
    report = service.analyze(
        k=config.constants(),
        literal_spin=config.paper_literal_spin,
        drop=config.drop_generator,
        closure_tol=config.tolerance("tol_closure"),
        jacobi_tol=config.tolerance("tol_jacobi"),
        zero_tol=config.tolerance("tol_killing_zero"),
    )
    mismatch = sum(abs(a - b) for a, b in zip(report.killing_signature, report.oracle_signature))
    pair = " x ".join(report.worst_pair) if report.worst_pair else None

    checks = [
        CheckResult.evaluate(
            "lie_span_rank",
            References.SO42,
            float(abs(report.span_rank - SO42_DIMENSION)),
            0.0,
            detail=f"rank {report.span_rank} of {report.dimension} generators",
        ),
        CheckResult.evaluate(
            "lie_closure",
            References.SO42,
            report.max_closure_residual,
            config.tolerance("tol_closure"),
            detail=f"beta-adjoint real form, worst pair {pair}" if pair else None,
        ),
        CheckResult.evaluate(
            "lie_jacobi",
            References.SO42,
            report.max_jacobi_residual,
            config.tolerance("tol_jacobi"),
        ),
        CheckResult.evaluate(
            "lie_oracle_jacobi",
            References.SO42,
            report.oracle_jacobi_residual,
            config.tolerance("tol_jacobi"),
            detail="canonical generators with metric diag(+,+,+,+,-,-)",
        ),
        CheckResult.evaluate(
            "lie_killing_signature",
            References.SO42,
            float(mismatch),
            0.0,
            detail=(
                f"({_signature(report.killing_signature)}) against oracle "
                f"({_signature(report.oracle_signature)})"
            ),
        ),
        CheckResult.evaluate(
            "lie_identified",
            References.SO42,
            0.0 if report.is_identified else 1.0,
            0.0,
            detail=report.identified,
        ),
        CheckResult.reported(
            "lie_printed_phases_real_closure",
            References.SO42,
            report.literal_real_residual,
            detail="operators as listed, real coefficients",
        ),
        CheckResult.evaluate(
            "lie_printed_phases_complex_closure",
            References.SO42,
            report.literal_complex_residual,
            config.tolerance("tol_closure"),
            detail="operators as listed, complex coefficients",
        ),
    ]
    if config.paper_literal_spin:
        checks.append(
            CheckResult.reported(
                "spin_hermitian",
                References.SO42,
                report.spin_hermiticity_residual,
                detail="S_k = -(hbar/2) alpha_i alpha_j as printed",
            )
        )
        logger.warning(
            "Printed spin operators are not Hermitian (residual %.3g)",
            report.spin_hermiticity_residual,
        )
    else:
        checks.append(
            CheckResult.evaluate(
                "spin_hermitian",
                References.SO42,
                report.spin_hermiticity_residual,
                config.tolerance("tol_exact"),
                detail="S_k = (hbar/2) Sigma_k",
            )
        )

    values: Dict[str, ReportValue] = {
        "span_rank": report.span_rank,
        "dimension": report.dimension,
        "killing_signature": _signature(report.killing_signature),
        "oracle_signature": _signature(report.oracle_signature),
        "identified": report.identified,
        "closed_real_forms": len(report.real_forms),
    }
    for index, entry in enumerate(report.real_forms):
        phases = " ".join(f"{family}={phase}" for family, phase in entry.phases)
        values[f"real_form_{index:03d}"] = (
            f"{phases} -> {entry.label} ({_signature(entry.signature or ())})"
        )
    if config.drop_generator:
        values["dropped"] = config.drop_generator

    doc = new_document(Command.LIE, config)
    return doc.model_copy(
        update={
            "checks": checks,
            "values": values,
            "notes": [Adjudications.OQ3, Adjudications.OQ4],
        }
    )
