"""
Pydantic model for the run configuration.
"""
import math
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.constants import (
    COVERAGE_SIGMAS,
    DEFAULT_DIM,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_P_BATCH,
    DEFAULT_P_BATCH_RADIUS,
    DEFAULT_P_MAX,
    DEFAULT_P_MAX_3D,
    DEFAULT_POINTS_1D,
    DEFAULT_POINTS_3D,
    DEFAULT_SAMPLES,
    DEFAULT_SAMPLES_3D,
    DEFAULT_SEED,
    DEFAULT_SIGMA_P,
    DEFAULT_T_MAX,
    DEFAULT_T_MAX_3D,
    FD_MOMENTUM_STEP,
    FD_TIME_STEP,
    MIN_ZBW_PERIODS,
    MIN_ZBW_SAMPLES,
    RESOLUTION_POINTS,
    SPECTRUM_POINTS,
    TOL_ANTICOMMUTATOR,
    TOL_CLOSURE,
    TOL_EHRENFEST,
    TOL_EXACT,
    TOL_GRADIENT,
    TOL_IDENTITY,
    TOL_JACOBI,
    TOL_KILLING_ZERO,
    TOL_NORM,
    TOL_SPECTRUM_RELATIVE,
    TOL_TRAJECTORY,
    ErrorMessages,
    ModelSelection,
    UnitSystem,
)
from app.models.dynamics import MomentumGrid
from app.models.physics import PhysicalConstants

# Defaults that depend on the grid dimension: (1D, 3D)
GRID_DEFAULTS: Dict[str, Tuple[float, float]] = {
    "n_points": (DEFAULT_POINTS_1D, DEFAULT_POINTS_3D),
    "p_max": (DEFAULT_P_MAX, DEFAULT_P_MAX_3D),
    "t_max": (DEFAULT_T_MAX, DEFAULT_T_MAX_3D),
    "samples": (DEFAULT_SAMPLES, DEFAULT_SAMPLES_3D),
}

TOLERANCE_KEYS: Tuple[str, ...] = (
    "tol_exact",
    "tol_identity",
    "tol_spectrum",
    "tol_anticomm",
    "tol_eta",
    "tol_gradient",
    "tol_trajectory",
    "tol_norm",
    "tol_ehrenfest",
    "tol_closure",
    "tol_jacobi",
    "tol_killing_zero",
)


def _parse_complex_list(text: str) -> Tuple[complex, ...]:
    return tuple(complex(part.strip().replace(" ", "")) for part in text.split(","))


class RunConfig(BaseModel):
    """Every knob of a run; each key is settable from the config file and the command line."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    units: UnitSystem = Field(UnitSystem.NATURAL, description="natural or custom")
    m0: float = Field(1.0, gt=0, description="Rest mass (custom units)")
    c: float = Field(1.0, gt=0, description="Speed of light (custom units)")
    hbar: float = Field(1.0, gt=0, description="Reduced Planck constant (custom units)")

    dim: int = Field(DEFAULT_DIM, description="Grid dimension, 1 or 3")
    n_points: int = Field(DEFAULT_POINTS_1D, description="Points per axis (power of two)")
    p_max: float = Field(DEFAULT_P_MAX, gt=0, description="Grid half extent")

    p0: Tuple[float, float, float] = Field((0.0, 0.0, 0.0), description="Packet mean momentum")
    sigma_p: float = Field(DEFAULT_SIGMA_P, gt=0, description="Packet momentum width")
    spinor_weight: Tuple[complex, complex, complex, complex] = Field(
        (1 / math.sqrt(2), 0j, 1 / math.sqrt(2), 0j), description="Initial spinor"
    )

    t_max: float = Field(DEFAULT_T_MAX, gt=0, description="Series end time")
    samples: int = Field(DEFAULT_SAMPLES, ge=MIN_ZBW_SAMPLES, description="Series samples")
    model: ModelSelection = Field(ModelSelection.PAPER, description="paper, dirac, pauli or all")

    p_batch: int = Field(DEFAULT_P_BATCH, gt=0, description="Random momenta per identity check")
    p_batch_radius: float = Field(
        DEFAULT_P_BATCH_RADIUS, gt=0, description="Batch ball radius, units m0 c"
    )
    seed: int = Field(DEFAULT_SEED, ge=0, description="Random seed")
    output_dir: str = Field(DEFAULT_OUTPUT_DIR, description="Directory for result files")
    spectrum_points: int = Field(SPECTRUM_POINTS, ge=2, description="Rows of the dispersion table")

    tol_all: Optional[float] = Field(None, gt=0, description="Overrides every tolerance")
    tol_exact: float = Field(TOL_EXACT, gt=0)
    tol_identity: float = Field(TOL_IDENTITY, gt=0)
    tol_spectrum: float = Field(TOL_SPECTRUM_RELATIVE, gt=0)
    tol_anticomm: float = Field(TOL_ANTICOMMUTATOR, gt=0)
    tol_eta: float = Field(TOL_ANTICOMMUTATOR, gt=0)
    tol_gradient: float = Field(TOL_GRADIENT, gt=0)
    tol_trajectory: float = Field(TOL_TRAJECTORY, gt=0)
    tol_norm: float = Field(TOL_NORM, gt=0)
    tol_ehrenfest: float = Field(TOL_EHRENFEST, gt=0)
    tol_closure: float = Field(TOL_CLOSURE, gt=0)
    tol_jacobi: float = Field(TOL_JACOBI, gt=0)
    tol_killing_zero: float = Field(TOL_KILLING_ZERO, gt=0)
    fd_momentum_step: float = Field(FD_MOMENTUM_STEP, gt=0)
    fd_time_step: float = Field(FD_TIME_STEP, gt=0)

    drop_generator: Optional[str] = Field(None, description="Generator or family left out")
    paper_literal_spin: bool = Field(False, description="Use S_k = -(hbar/2) alpha_i alpha_j")

    @model_validator(mode="before")
    @classmethod
    def _grid_defaults(cls, data):
        if not isinstance(data, dict):
            return data
        column = 1 if int(data.get("dim", DEFAULT_DIM)) == 3 else 0
        missing = {
            key: values[column] for key, values in GRID_DEFAULTS.items() if data.get(key) is None
        }
        return {**data, **missing}

    @field_validator("p0", mode="before")
    @classmethod
    def _parse_p0(cls, value):
        if isinstance(value, str):
            parts = [float(x) for x in value.split(",")]
            if len(parts) == 1:
                return (0.0, 0.0, parts[0])
            return tuple(parts)
        if isinstance(value, (int, float)):
            return (0.0, 0.0, float(value))
        return value

    @field_validator("spinor_weight", mode="before")
    @classmethod
    def _parse_weight(cls, value):
        if isinstance(value, str):
            return _parse_complex_list(value)
        return value

    @field_validator("spinor_weight")
    @classmethod
    def _nonzero_weight(cls, value):
        if not any(abs(x) > 0 for x in value):
            raise ValueError(ErrorMessages.ZERO_SPINOR_WEIGHT)
        return value

    @model_validator(mode="after")
    def _module_preconditions(self) -> "RunConfig":
        if self.units == UnitSystem.NATURAL and (self.m0, self.c, self.hbar) != (1.0, 1.0, 1.0):
            raise ValueError("m0, c and hbar can only be changed with units = custom")
        MomentumGrid(dim=self.dim, n_points=self.n_points, p_max=self.p_max)
        if self.dim == 1 and (self.p0[0] != 0.0 or self.p0[1] != 0.0):
            raise ValueError("a 1D grid carries momentum along z only")
        needed = float(np.max(np.abs(self.p0))) + COVERAGE_SIGMAS * self.sigma_p
        if self.p_max < needed:
            raise ValueError(
                ErrorMessages.GRID_TOO_SMALL.format(
                    p_max=self.p_max, sigmas=COVERAGE_SIGMAS, needed=needed
                )
            )
        spacing = self.grid().spacing
        if self.sigma_p < RESOLUTION_POINTS * spacing:
            raise ValueError(
                ErrorMessages.GRID_TOO_COARSE.format(
                    sigma_p=self.sigma_p, points=RESOLUTION_POINTS, spacing=spacing
                )
            )
        periods = self.t_max * self.constants().zitter_frequency / (2.0 * math.pi)
        if periods < MIN_ZBW_PERIODS:
            raise ValueError(
                ErrorMessages.TOO_FEW_PERIODS.format(periods=periods, needed=MIN_ZBW_PERIODS)
            )
        return self

    def constants(self) -> PhysicalConstants:
        return PhysicalConstants(m0=self.m0, c=self.c, hbar=self.hbar)

    def grid(self) -> MomentumGrid:
        return MomentumGrid(dim=self.dim, n_points=self.n_points, p_max=self.p_max)

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def tolerance(self, key: str) -> float:
        """Tolerance ``key``, or ``tol_all`` when set."""
        if self.tol_all is not None:
            return self.tol_all
        return float(getattr(self, key))

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def units_label(self) -> str:
        return f"{self.units.value} (m0={self.m0!r}, c={self.c!r}, hbar={self.hbar!r})"
