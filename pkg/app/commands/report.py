"""
Full verification report: every suite merged into one document.
"""
from app.commands import algebra, compare, lie, new_document, spectrum
from app.constants import Adjudications, Command, References
from app.core.logging import get_logger
from app.dependencies import get_report_service
from app.models.config import RunConfig
from app.models.report import CheckResult, ReportDocument

logger = get_logger(__name__)


def _seeded_suites(config: RunConfig) -> ReportDocument:
    return algebra.run(config).merge(spectrum.run(config)).merge(lie.run(config))


def run(config: RunConfig) -> ReportDocument:
    """
    Run the algebra, spectrum, Lie and model-comparison suites and merge them.

    The algebra, spectrum and Lie suites are run twice more in this process and
    the two renderings compared byte for byte. Reproducibility across processes
    is not covered by this check.

    Args:
        config: Validated run configuration

    Returns:
        ReportDocument: Merged checks, values, notes and outputs
    """
    reports = get_report_service()
    doc = new_document(Command.REPORT, config)
    for suite in (algebra, spectrum, lie, compare):
        logger.info("Running the %s suite", suite.__name__.rsplit(".", 1)[-1])
        doc = doc.merge(suite.run(config))

    first = reports.render_report(_seeded_suites(config))
    second = reports.render_report(_seeded_suites(config))
    doc = doc.merge(
        new_document(Command.REPORT, config).model_copy(
            update={
                "checks": [
                    CheckResult.evaluate(
                        "determinism",
                        References.ARTIFACT,
                        0.0 if first == second else 1.0,
                        0.0,
                        detail="two in-process renderings of algebra, spectrum and lie",
                    )
                ],
                "notes": [
                    Adjudications.OQ1,
                    Adjudications.OQ2,
                    Adjudications.OQ3,
                    Adjudications.OQ4,
                ],
            }
        )
    )
    return doc
