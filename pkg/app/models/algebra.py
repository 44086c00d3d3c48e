"""
Pydantic models for Lie-algebra analysis of the rest-frame operators.
"""
from typing import List, Optional, Tuple

import numpy as np
from pydantic import Field, field_validator

from app.models.base import ComplexMatrix4, FrozenModel, readonly


class Generator(FrozenModel):
    """One dimensionless generator with its stripped physical prefactor."""
    name: str = Field(..., description="Label, e.g. 'S3' or 'i_gamma5'")
    family: str = Field(..., description="Operator family sharing a phase convention")
    matrix: ComplexMatrix4 = Field(..., description="Dimensionless matrix")
    prefactor: str = Field("1", description="Physical prefactor removed for the analysis")
    prefactor_value: float = Field(1.0, description="Numeric value of the prefactor")

    @field_validator("matrix")
    @classmethod
    def _freeze(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value, np.complex128)

    def scaled(self, factor: complex, suffix: str = "") -> "Generator":
        return self.model_copy(update={"matrix": readonly(factor * self.matrix, np.complex128),
                                       "name": self.name + suffix})


class GeneratorSet(FrozenModel):
    """Ordered candidate generators of a Lie algebra."""
    generators: Tuple[Generator, ...] = Field(..., description="Generators in analysis order")

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    @property
    def families(self) -> List[str]:
        seen: List[str] = []
        for g in self.generators:
            if g.family not in seen:
                seen.append(g.family)
        return seen

    def matrices(self) -> np.ndarray:
        """Stacked (n, d, d) matrices."""
        return np.stack([g.matrix for g in self.generators])


class StructureConstants(FrozenModel):
    """f[a][b][c] with [X_a, X_b] = sum_c f[a][b][c] X_c."""
    values: np.ndarray = Field(..., description="Rank-3 array, real or complex")
    labels: Tuple[str, ...] = Field(..., description="Generator labels along each axis")
    field: str = Field("real", description="'real' or 'complex' coefficient field")

    @field_validator("values")
    @classmethod
    def _freeze(cls, value: np.ndarray) -> np.ndarray:
        return readonly(value)

    @property
    def dimension(self) -> int:
        return self.values.shape[0]

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.values + np.swapaxes(self.values, 0, 1))))


class ClosureResult(FrozenModel):
    """Structure constants together with the out-of-span residual."""
    structure_constants: StructureConstants
    max_residual: float = Field(..., ge=0, description="Largest entry of sum f X - [X_a, X_b]")
    worst_pair: Optional[Tuple[str, str]] = Field(None, description="Pair with max_residual")
    passed: bool = Field(..., description="max_residual below tolerance")


class KillingSignature(FrozenModel):
    """Eigenvalue sign counts of the Killing matrix."""
    n_pos: int = Field(..., ge=0)
    n_neg: int = Field(..., ge=0)
    n_zero: int = Field(..., ge=0)
    symmetry_residual: float = Field(0.0, ge=0, description="max |B - B^T|")

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n_pos, self.n_neg, self.n_zero)


class OracleResult(FrozenModel):
    """Canonical so(4,2) ground truth built from 6x6 metric generators."""
    structure_constants: StructureConstants
    signature: KillingSignature
    jacobi_residual: float = Field(..., ge=0)
    closure_residual: float = Field(..., ge=0)
    compact_dimension: int = Field(..., ge=0, description="Negative Killing directions")


class RealFormEntry(FrozenModel):
    """One phase assignment of the real-form scan."""
    phases: Tuple[Tuple[str, str], ...] = Field(..., description="(family, '1' or 'i')")
    closed: bool
    closure_residual: float = Field(..., ge=0)
    signature: Optional[Tuple[int, int, int]] = None
    label: str = ""


class ClosureReport(FrozenModel):
    """Summary of the rest-frame Lie-algebra analysis."""
    span_rank: int = Field(..., ge=0, le=16, description="Gram rank under the trace inner product")
    dimension: int = Field(..., ge=0, description="Number of generators analysed")
    max_closure_residual: float = Field(..., ge=0, description="Real-form closure residual")
    worst_pair: Optional[Tuple[str, str]] = None
    max_jacobi_residual: float = Field(..., ge=0)
    killing_signature: Tuple[int, int, int]
    oracle_signature: Tuple[int, int, int]
    oracle_jacobi_residual: float = Field(..., ge=0)
    literal_real_residual: float = Field(..., ge=0, description="Closure of printed phases over R")
    literal_complex_residual: float = Field(..., ge=0, description="Closure over C (fallback)")
    spin_hermiticity_residual: float = Field(..., ge=0)
    identified: str = Field(..., description="Identification label")
    real_forms: Tuple[RealFormEntry, ...] = Field((), description="Closed phase assignments")

    @property
    def is_identified(self) -> bool:
        return self.identified.startswith("so(4,2)")
