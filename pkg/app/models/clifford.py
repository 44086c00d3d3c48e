"""
Pydantic models for the Dirac-algebra data structures.
"""
from typing import Dict, Tuple

import numpy as np
from pydantic import Field, field_validator

from app.models.base import ComplexMatrix4, FrozenModel, readonly

SIGMA_PAIRS: Tuple[Tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


class DiracBasis(FrozenModel):
    """Named Dirac matrices in the Dirac representation, upper Lorentz indices."""
    identity: ComplexMatrix4 = Field(..., description="4x4 identity")
    gamma: Tuple[ComplexMatrix4, ComplexMatrix4, ComplexMatrix4, ComplexMatrix4] = Field(
        ..., description="gamma^0 .. gamma^3"
    )
    gamma5: ComplexMatrix4 = Field(..., description="i gamma^0 gamma^1 gamma^2 gamma^3")
    alpha: Tuple[ComplexMatrix4, ComplexMatrix4, ComplexMatrix4] = Field(
        ..., description="alpha_1 .. alpha_3 = gamma^0 gamma^k"
    )
    sigma_upper: Tuple[ComplexMatrix4, ...] = Field(
        ..., description="sigma^{mu nu} = (i/2)[gamma^mu, gamma^nu] for SIGMA_PAIRS"
    )
    gamma5_gamma: Tuple[ComplexMatrix4, ...] = Field(..., description="gamma_5 gamma^mu")
    hermitian_basis: Tuple[ComplexMatrix4, ...] = Field(
        ..., description="16 Hermitian elements with Tr(G_A^dagger G_B) = 4 delta_AB"
    )
    hermitian_labels: Tuple[str, ...] = Field(..., description="Labels of hermitian_basis")

    @field_validator("identity", "gamma5")
    @classmethod
    def _freeze_matrix(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value, np.complex128)

    @field_validator("gamma", "alpha", "sigma_upper", "gamma5_gamma", "hermitian_basis")
    @classmethod
    def _freeze_matrices(cls, value: tuple) -> tuple:
        return tuple(readonly(m, np.complex128) for m in value)

    @property
    def beta(self) -> np.ndarray:
        """beta, the same matrix as gamma^0."""
        return self.gamma[0]

    @property
    def stacked_basis(self) -> np.ndarray:
        """Hermitian basis as a (16, 4, 4) array."""
        return np.stack(self.hermitian_basis)

    def named(self) -> Dict[str, np.ndarray]:
        """Every named matrix, including the aliases."""
        names: Dict[str, np.ndarray] = {"identity": self.identity, "beta": self.beta}
        for mu, g in enumerate(self.gamma):
            names[f"gamma{mu}"] = g
        names["gamma5"] = self.gamma5
        for k, a in enumerate(self.alpha, start=1):
            names[f"alpha{k}"] = a
        for (mu, nu), s in zip(SIGMA_PAIRS, self.sigma_upper):
            names[f"sigma{mu}{nu}"] = s
        for mu, g in enumerate(self.gamma5_gamma):
            names[f"gamma5_gamma{mu}"] = g
        return names
