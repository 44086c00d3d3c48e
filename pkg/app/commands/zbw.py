"""
Zitterbewegung experiment: evolve a Gaussian spinor packet, write the series and
extract drift, frequency and amplitude.
"""
from pathlib import Path
from typing import Dict, List

import numpy as np
from pydantic import Field

from app.commands import new_document, selected_models
from app.constants import (
    PAULI_AMPLITUDE_BOUND,
    SERIES_FILE,
    TOL_POSITION_CROSSCHECK,
    ZBW_AMPLITUDE_TOLERANCE,
    ZBW_FREQUENCY_TOLERANCE,
    Command,
    HamiltonianKind,
    References,
)
from app.core.logging import get_logger
from app.dependencies import get_dynamics_service, get_hamiltonian_service, get_report_service
from app.models.base import FrozenModel
from app.models.config import RunConfig
from app.models.dynamics import ObservableSeries, SpinorField, ZbwReport
from app.models.report import CheckResult, ReportDocument, ReportValue

logger = get_logger(__name__)


class ModelRun(FrozenModel):
    """One model's series, its analysis and the checks derived from them."""
    kind: HamiltonianKind
    series: ObservableSeries
    analysis: ZbwReport
    oracle: ZbwReport = Field(..., description="Analysis of the closed-form series")
    checks: List[CheckResult] = Field(default_factory=list)
    values: Dict[str, ReportValue] = Field(default_factory=dict)
    path: Path


def _drift(column: np.ndarray) -> float:
    return float(np.max(np.abs(column - column[0])))


def _relative(value: float, expected: float) -> float:
    return abs(value - expected) / abs(expected) if expected else abs(value)


def packet(config: RunConfig) -> SpinorField:
    """Initial packet described by the configuration."""
    return get_dynamics_service().gaussian_packet(
        config.grid(), config.p0, config.sigma_p, config.spinor_weight
    )


def analyse_model(
    config: RunConfig, kind: HamiltonianKind, field: SpinorField, command: Command
) -> ModelRun:
    """
    Evolve ``field`` under one model, write its series and evaluate the dynamics checks.

    Args:
        config: Validated run configuration
        kind: paper, dirac or pauli
        field: Initial packet
        command: Command naming the series file

    Returns:
        ModelRun: Series, analyses, checks and headline values

    Raises:
        ConfigError: If the series is too short for the analysis
        OutputError: If the series cannot be written
    """
    dynamics = get_dynamics_service()
    hamiltonian = get_hamiltonian_service()
    reports = get_report_service()
    k = config.constants()
    times = config.times()
    name = kind.value
    logger.info("Evolving the %s model over %d samples", name, times.size)

    series = dynamics.observable_series(field, kind, times, k)
    filename = SERIES_FILE.format(command=command.value, model=name)
    path = reports.output_path(config.output_dir, filename)
    reports.write_series(series, path)
    analysis = dynamics.zbw_analysis(series)
    closed = dynamics.closed_form_series(field, kind, times, k)
    oracle = dynamics.zbw_analysis(closed)
    position = dynamics.expect_position(field, k)
    midpoint = float(times[times.size // 2])
    moved = dynamics.expect_position(dynamics.evolve(field, kind, midpoint, k), k)

    tol_norm = config.tolerance("tol_norm")
    checks = [
        CheckResult.evaluate(
            f"{name}.norm_drift", References.SCHRODINGER, _drift(series["norm"]), tol_norm
        ),
        CheckResult.evaluate(
            f"{name}.energy_drift", References.SCHRODINGER, _drift(series["energy"]), tol_norm
        ),
        CheckResult.evaluate(
            f"{name}.momentum_drift", References.SCHRODINGER, _drift(series["p_z"]), tol_norm
        ),
        CheckResult.evaluate(
            f"{name}.position_cross_check",
            References.SCHRODINGER,
            max(position.cross_check_residual, moved.cross_check_residual),
            TOL_POSITION_CROSSCHECK,
            detail=f"Fourier position against the i hbar d/dp stencil at t = 0 and {midpoint:.6g}",
        ),
        CheckResult.evaluate(
            f"{name}.ehrenfest",
            References.VELOCITY,
            dynamics.ehrenfest_check(
                field, kind, times, k, step=config.fd_time_step * k.compton_time
            ),
            config.tolerance("tol_ehrenfest"),
        ),
        CheckResult.evaluate(
            f"{name}.boundary_mass",
            References.ARTIFACT,
            float(series.aliasing_detected),
            0.0,
            detail="1 when the packet reaches the outer grid cells",
        ),
        CheckResult.evaluate(
            f"{name}.closed_form_agreement",
            References.TRAJECTORY,
            float(np.max(np.abs(series["q_z"] - closed["q_z"]))),
            config.tolerance("tol_trajectory"),
            detail="numerical <q_z>(t) against the mode-by-mode closed form",
        ),
    ]

    p0 = float(np.linalg.norm(config.p0))
    expected = 0.0
    if kind == HamiltonianKind.PAULI:
        checks.append(
            CheckResult.evaluate(
                f"{name}.amplitude_bound",
                References.PAULI,
                analysis.oscillation_amplitude,
                PAULI_AMPLITUDE_BOUND,
            )
        )
    else:
        expected = 2.0 * float(hamiltonian.dispersion(kind, np.array(p0), k)) / k.hbar
        checks += [
            CheckResult.evaluate(
                f"{name}.frequency",
                References.ETA_EVOLUTION,
                _relative(analysis.oscillation_frequency, expected),
                ZBW_FREQUENCY_TOLERANCE,
                detail=f"relative to 2 E(|p0|)/hbar = {expected:.6g}",
            ),
            CheckResult.evaluate(
                f"{name}.amplitude",
                References.TRAJECTORY,
                _relative(analysis.oscillation_amplitude, oracle.oscillation_amplitude),
                ZBW_AMPLITUDE_TOLERANCE,
                detail="relative to the closed-form series amplitude",
            ),
        ]
    if series.aliasing_detected:
        logger.warning("The %s series is affected by aliasing; enlarge the grid", name)

    values: Dict[str, ReportValue] = {
        f"{name}.drift_velocity": analysis.drift_velocity,
        f"{name}.oscillation_frequency": analysis.oscillation_frequency,
        f"{name}.oscillation_amplitude": analysis.oscillation_amplitude,
        f"{name}.residual_power": analysis.residual_power,
        f"{name}.peak_prominence": analysis.peak_prominence,
        f"{name}.expected_frequency": expected,
        f"{name}.closed_form_drift": oracle.drift_velocity,
        f"{name}.closed_form_amplitude": oracle.oscillation_amplitude,
        f"{name}.boundary_mass_t0": position.boundary_mass,
        f"{name}.position_cross_check_t": midpoint,
    }
    logger.info(
        "%s: drift %.6g, frequency %.6g, amplitude %.6g",
        name,
        analysis.drift_velocity,
        analysis.oscillation_frequency,
        analysis.oscillation_amplitude,
    )
    return ModelRun(
        kind=kind,
        series=series,
        analysis=analysis,
        oracle=oracle,
        checks=checks,
        values=values,
        path=path,
    )


def run(config: RunConfig) -> ReportDocument:
    """
    Run the Zitterbewegung experiment for the selected model(s).

    Args:
        config: Validated run configuration

    Returns:
        ReportDocument: Conservation, Ehrenfest and oscillation checks per model

    Raises:
        GridCoverageError: If the grid does not cover the packet
    """
    field = packet(config)
    runs = [analyse_model(config, kind, field, Command.ZBW) for kind in selected_models(config)]
    doc = new_document(Command.ZBW, config)
    return doc.model_copy(
        update={
            "checks": [check for r in runs for check in r.checks],
            "values": {key: value for r in runs for key, value in r.values.items()},
            "outputs": [str(r.path) for r in runs],
        }
    )
