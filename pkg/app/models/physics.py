"""
Pydantic models for momentum-space operators of the free spin-1/2 particle.
"""
import math
from typing import Sequence, Tuple, Union

import numpy as np
from pydantic import Field, field_validator

from app.constants import ErrorMessages
from app.models.base import ComplexMatrix4, FrozenModel, readonly


class PhysicalConstants(FrozenModel):
    """Mass, speed of light and reduced Planck constant of a run."""
    m0: float = Field(default=1.0, description="Rest mass")
    c: float = Field(default=1.0, description="Speed of light")
    hbar: float = Field(default=1.0, description="Reduced Planck constant")

    @field_validator("m0", "c", "hbar")
    @classmethod
    def _strictly_positive(cls, value: float, info) -> float:
        if not (math.isfinite(value) and value > 0):
            raise ValueError(
                ErrorMessages.NONPOSITIVE_CONSTANT.format(name=info.field_name, value=value)
            )
        return value

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        """m0 = c = hbar = 1."""
        return cls()

    @property
    def rest_energy(self) -> float:
        return self.m0 * self.c * self.c

    @property
    def compton_time(self) -> float:
        """hbar / (m0 c^2), the time unit of the series files."""
        return self.hbar / self.rest_energy

    @property
    def compton_length(self) -> float:
        """hbar / (m0 c), the length unit of the series files."""
        return self.hbar / (self.m0 * self.c)

    @property
    def zitter_frequency(self) -> float:
        """Angular frequency 2 m0 c^2 / hbar of the rest-frame oscillation."""
        return 2.0 * self.rest_energy / self.hbar


class MomentumVector(FrozenModel):
    """Three real momentum components."""
    p: Tuple[float, float, float] = Field(..., description="Momentum components")

    @field_validator("p")
    @classmethod
    def _finite(cls, value: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if not all(math.isfinite(x) for x in value):
            raise ValueError(ErrorMessages.NONFINITE_MOMENTUM.format(p=value))
        return value

    @classmethod
    def of(cls, p: "MomentumLike") -> "MomentumVector":
        """Coerce a vector-like value into a MomentumVector."""
        if isinstance(p, MomentumVector):
            return p
        x, y, z = (float(v) for v in np.asarray(p, dtype=float).reshape(3))
        return cls(p=(x, y, z))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.p, dtype=float)

    @property
    def squared(self) -> float:
        a = self.array
        return float(a @ a)


MomentumLike = Union[MomentumVector, Sequence[float], np.ndarray]


class OperatorTriple(FrozenModel):
    """Cartesian components of a vector operator at fixed momentum."""
    components: Tuple[ComplexMatrix4, ComplexMatrix4, ComplexMatrix4] = Field(
        ..., description="Components i = 1, 2, 3"
    )
    unit: str = Field(default="", description="Physical unit of the components")

    @field_validator("components")
    @classmethod
    def _freeze(cls, value: tuple) -> tuple:
        return tuple(readonly(m, np.complex128) for m in value)

    def __getitem__(self, index: int) -> np.ndarray:
        return self.components[index]

    def __iter__(self):  # type: ignore[override]
        return iter(self.components)

    def hermiticity_residual(self) -> float:
        """Largest entry of M - M^dagger over the three components."""
        return max(float(np.max(np.abs(m - m.conj().T))) for m in self.components)


class SpectralDecomposition(FrozenModel):
    """Eigenvalues sorted descending and matching orthonormal eigenvectors (columns)."""
    eigenvalues: np.ndarray = Field(..., description="Four real eigenvalues, descending")
    eigenvectors: np.ndarray = Field(..., description="4x4 unitary, column k for eigenvalue k")

    @field_validator("eigenvalues")
    @classmethod
    def _freeze_values(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value, float)

    @field_validator("eigenvectors")
    @classmethod
    def _freeze_vectors(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value, np.complex128)

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def apply(self, function) -> np.ndarray:
        """Matrix function f(H) = V f(lambda) V^dagger."""
        v = self.eigenvectors
        return (v * function(self.eigenvalues)) @ v.conj().T

    def projector(self, sign: int) -> np.ndarray:
        """Projector onto the positive (sign=+1) or negative (sign=-1) energy subspace."""
        mask = self.eigenvalues > 0 if sign > 0 else self.eigenvalues < 0
        v = self.eigenvectors[:, mask]
        return v @ v.conj().T

    def orthonormality_residual(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(4))))


class AnticommutatorIdentity(FrozenModel):
    """Both sides of {H, v_i} = (2E/m0) p_i for the exact and the printed E."""
    lhs: OperatorTriple = Field(..., description="{H, v_i}")
    rhs_exact: OperatorTriple = Field(..., description="(2/m0)(m0 c^2 + p^2/2m0) p_i I")
    rhs_paper: OperatorTriple = Field(..., description="(2/m0) sqrt(c^2 p^2 + m0^2 c^4) p_i I")
    residual_exact: float = Field(..., ge=0, description="max |lhs - rhs_exact|")
    residual_paper: float = Field(..., ge=0, description="max |lhs - rhs_paper|")
