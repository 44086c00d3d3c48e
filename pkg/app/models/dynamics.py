"""
Pydantic models for wavepacket dynamics on a momentum grid.
"""
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from app.constants import ErrorMessages, HamiltonianKind
from app.models.base import FrozenModel, readonly


class MomentumGrid(FrozenModel):
    """Uniform periodic momentum grid with N points per axis on [-p_max, p_max)."""
    dim: int = Field(..., description="Number of momentum axes (1 or 3)")
    n_points: int = Field(..., description="Points per axis, a power of two")
    p_max: float = Field(..., gt=0, description="Half extent of each axis")

    @field_validator("dim")
    @classmethod
    def _dimension(cls, value: int) -> int:
        if value not in (1, 3):
            raise ValueError(ErrorMessages.GRID_BAD_DIMENSION.format(dim=value))
        return value

    @field_validator("n_points")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value < 2 or value & (value - 1):
            raise ValueError(ErrorMessages.GRID_NOT_POWER_OF_TWO.format(n=value))
        return value

    @property
    def spacing(self) -> float:
        return 2.0 * self.p_max / self.n_points

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n_points,) * self.dim

    @property
    def cell(self) -> float:
        """Volume element dp^dim."""
        return self.spacing ** self.dim

    def axis(self) -> np.ndarray:
        """Momentum nodes of one axis, p = (j - N/2) dp."""
        return (np.arange(self.n_points) - self.n_points // 2) * self.spacing

    def position_axis(self, hbar: float) -> np.ndarray:
        """Conjugate position nodes, x = (k - N/2) dx with dx = 2 pi hbar / (N dp)."""
        dx = 2.0 * np.pi * hbar / (self.n_points * self.spacing)
        return (np.arange(self.n_points) - self.n_points // 2) * dx

    def active_axes(self) -> Tuple[int, ...]:
        """Cartesian indices carried by the grid axes (z only in 1D)."""
        return (2,) if self.dim == 1 else (0, 1, 2)

    def momenta(self) -> np.ndarray:
        """Momentum vector of every node, shape grid.shape + (3,)."""
        p = self.axis()
        if self.dim == 1:
            out = np.zeros((self.n_points, 3))
            out[:, 2] = p
            return out
        px, py, pz = np.meshgrid(p, p, p, indexing="ij")
        return np.stack([px, py, pz], axis=-1)


class SpinorField(FrozenModel):
    """Four-component amplitudes psi(p) on a momentum grid."""
    grid: MomentumGrid = Field(..., description="Grid carrying the amplitudes")
    values: np.ndarray = Field(..., description="Complex array of shape grid.shape + (4,)")

    @model_validator(mode="after")
    def _shape_matches(self) -> "SpinorField":
        expected = self.grid.shape + (4,)
        if self.values.shape != expected:
            raise ValueError(f"spinor values have shape {self.values.shape}, expected {expected}")
        return self

    @field_validator("values")
    @classmethod
    def _freeze(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value, np.complex128)

    def density(self) -> np.ndarray:
        """|psi(p)|^2 summed over spinor components."""
        return np.sum(np.abs(self.values) ** 2, axis=-1)

    def norm(self) -> float:
        return float(np.sum(self.density()) * self.grid.cell)


class ObservableSeries(FrozenModel):
    """Time series of expectation values."""
    times: np.ndarray = Field(..., description="Strictly increasing times, units hbar/(m0 c^2)")
    columns: Dict[str, np.ndarray] = Field(..., description="Observable name -> real values")
    model: Optional[HamiltonianKind] = Field(None, description="Hamiltonian used, if any")
    aliasing_detected: bool = Field(False, description="Boundary mass above threshold somewhere")

    @field_validator("times")
    @classmethod
    def _increasing(cls, value: np.ndarray) -> np.ndarray:
        value = readonly(value, float)
        if value.ndim != 1 or (value.size > 1 and np.any(np.diff(value) <= 0)):
            raise ValueError(ErrorMessages.TIMES_NOT_INCREASING)
        return value

    @field_validator("columns")
    @classmethod
    def _finite_columns(cls, value: Dict[str, np.ndarray]) -> Dict[str, np.ndarray]:
        frozen = {name: readonly(column, float) for name, column in value.items()}
        for name, column in frozen.items():
            if not np.all(np.isfinite(column)):
                raise ValueError(f"observable {name!r} has non-finite values")
        return frozen

    @model_validator(mode="after")
    def _aligned(self) -> "ObservableSeries":
        for name, column in self.columns.items():
            if column.shape != self.times.shape:
                raise ValueError(f"observable {name!r} is not aligned with the time axis")
        return self

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


class PositionExpectation(FrozenModel):
    """<q> from the discrete Fourier transform, with the finite-difference cross-check."""
    value: np.ndarray = Field(..., description="<q_i>, i = x, y, z")
    cross_check: Optional[np.ndarray] = Field(None, description="<i hbar d/dp_i> by stencil")
    boundary_mass: float = Field(..., ge=0, description="Largest wrap-around probability")
    aliasing_detected: bool = Field(..., description="boundary_mass above threshold")

    @property
    def cross_check_residual(self) -> float:
        if self.cross_check is None:
            return float("nan")
        return float(np.max(np.abs(self.value - self.cross_check)))


class ZbwReport(FrozenModel):
    """Drift, frequency and amplitude extracted from a position series."""
    drift_velocity: float = Field(..., description="Linear drift b, units of c")
    oscillation_frequency: float = Field(..., ge=0, description="Angular frequency, m0c^2/hbar")
    oscillation_amplitude: float = Field(..., ge=0, description="Amplitude, hbar/(m0 c)")
    residual_power: float = Field(..., ge=0, description="Mean square of the fit residual")
    peak_prominence: float = Field(0.0, ge=0, description="Peak magnitude over spectral median")
