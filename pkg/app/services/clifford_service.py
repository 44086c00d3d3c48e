"""
Clifford service: Dirac matrices in the Dirac representation and the
16-element basis of the 4x4 complex matrix algebra.
"""
from typing import Dict, Tuple

import numpy as np

from app.core.logging import get_logger
from app.core.singleton import Singleton
from app.models.base import ComplexMatrix4
from app.models.clifford import SIGMA_PAIRS, DiracBasis
from app.models.physics import MomentumLike, MomentumVector

logger = get_logger(__name__)

PAULI: Tuple[np.ndarray, np.ndarray, np.ndarray] = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

HERMITIAN_LABELS: Tuple[str, ...] = (
    "I",
    "beta",
    "i_gamma1",
    "i_gamma2",
    "i_gamma3",
    "Sigma1",
    "Sigma2",
    "Sigma3",
    "alpha1",
    "alpha2",
    "alpha3",
    "gamma5",
    "i_gamma0_gamma5",
    "gamma1_gamma5",
    "gamma2_gamma5",
    "gamma3_gamma5",
)

# cyclic (i, j, k) with epsilon_123 = +1
CYCLIC: Tuple[Tuple[int, int, int], ...] = ((1, 2, 0), (2, 0, 1), (0, 1, 2))


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


class CliffordService(metaclass=Singleton):
    """Service for exact Dirac-algebra construction and manipulation."""

    def __init__(self):
        """Build the Dirac representation once; every later call reuses it."""
        self._basis = self._build_representation()
        logger.debug("Dirac representation built with %d basis elements", 16)

    @staticmethod
    def _build_representation() -> DiracBasis:
        zero = np.zeros((2, 2), dtype=np.complex128)
        eye2 = np.eye(2, dtype=np.complex128)
        identity = np.eye(4, dtype=np.complex128)

        beta = np.block([[eye2, zero], [zero, -eye2]])
        alpha = tuple(np.block([[zero, s], [s, zero]]) for s in PAULI)
        gamma = (beta,) + tuple(beta @ a for a in alpha)

        # gamma^0 gamma^1 gamma^2 gamma^3 = -i [[0, I], [I, 0]]; the factor i makes gamma5 Hermitian
        gamma5 = 1j * (gamma[0] @ gamma[1] @ gamma[2] @ gamma[3])

        sigma_upper = tuple(
            0.5j * (gamma[mu] @ gamma[nu] - gamma[nu] @ gamma[mu]) for mu, nu in SIGMA_PAIRS
        )
        gamma5_gamma = tuple(gamma5 @ g for g in gamma)
        sigma = tuple(-1j * alpha[i] @ alpha[j] for i, j, _ in CYCLIC)

        hermitian = (
            identity,
            beta,
            *(1j * g for g in gamma[1:]),
            *sigma,
            *alpha,
            gamma5,
            1j * gamma[0] @ gamma5,
            *(g @ gamma5 for g in gamma[1:]),
        )
        return DiracBasis(
            identity=identity,
            gamma=gamma,
            gamma5=gamma5,
            alpha=alpha,
            sigma_upper=sigma_upper,
            gamma5_gamma=gamma5_gamma,
            hermitian_basis=hermitian,
            hermitian_labels=HERMITIAN_LABELS,
        )

    def dirac_representation(self) -> DiracBasis:
        """
        Standard Dirac (Dirac-Pauli) representation.

        Returns:
            DiracBasis: beta diagonal, alpha_k block-off-diagonal Pauli matrices,
            all entries exact Gaussian integers
        """
        return self._basis

    @staticmethod
    def mul(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
        """Matrix product a b."""
        return np.asarray(a) @ np.asarray(b)

    @staticmethod
    def adjoint(a: ComplexMatrix4) -> ComplexMatrix4:
        """Conjugate transpose (acts on the last two axes of stacked matrices)."""
        return np.conj(np.swapaxes(np.asarray(a), -1, -2))

    @staticmethod
    def commutator(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
        """[a, b] = a b - b a."""
        return a @ b - b @ a

    @staticmethod
    def anticommutator(a: ComplexMatrix4, b: ComplexMatrix4) -> ComplexMatrix4:
        """{a, b} = a b + b a."""
        return a @ b + b @ a

    def basis_decompose(self, m: np.ndarray) -> np.ndarray:
        """
        Coefficients in the Hermitian-normalized basis.

        Args:
            m: A 4x4 matrix or a stack (..., 4, 4)

        Returns:
            np.ndarray: c_A = Tr(G_A^dagger m) / 4, shape (..., 16)
        """
        basis = self._basis.stacked_basis
        return np.einsum("aji,...ji->...a", basis.conj(), np.asarray(m, dtype=np.complex128)) / 4.0

    def reconstruct(self, coefficients: np.ndarray) -> np.ndarray:
        """Inverse of basis_decompose: sum_A c_A G_A."""
        return np.einsum("...a,aij->...ij", coefficients, self._basis.stacked_basis)

    def alpha_dot(self, p: MomentumLike) -> ComplexMatrix4:
        """alpha . p for one momentum."""
        vec = MomentumVector.of(p).array
        return np.einsum("k,kij->ij", vec, np.stack(self._basis.alpha))

    def spin_matrices(self, literal: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Spin matrices Sigma_k (without the hbar/2 factor).

        Args:
            literal: Use -alpha_i alpha_j as printed, which is anti-Hermitian

        Returns:
            Three 4x4 matrices for k = 1, 2, 3
        """
        alpha = self._basis.alpha
        phase = -1.0 if literal else -1j
        spins = tuple(phase * alpha[i] @ alpha[j] for i, j, _ in CYCLIC)
        return spins  # type: ignore[return-value]

    def gamma_factor(self) -> ComplexMatrix4:
        """Gamma = -i beta gamma5."""
        return -1j * self._basis.beta @ self._basis.gamma5

    def clifford_residuals(self) -> Dict[str, float]:
        """
        Residual of every defining relation of the representation.

        Returns:
            Dict[str, float]: relation name -> max entrywise deviation (0 when exact)
        """
        b = self._basis
        eye = b.identity
        out: Dict[str, float] = {}
        for mu in range(4):
            for nu in range(mu, 4):
                lhs = self.anticommutator(b.gamma[mu], b.gamma[nu])
                out[f"clifford_gamma{mu}_gamma{nu}"] = _max_abs(lhs - 2.0 * METRIC[mu, nu] * eye)
        for mu in range(4):
            out[f"gamma5_anticommutes_gamma{mu}"] = _max_abs(
                self.anticommutator(b.gamma5, b.gamma[mu])
            )
        for k in range(3):
            out[f"gamma5_commutes_alpha{k + 1}"] = _max_abs(self.commutator(b.gamma5, b.alpha[k]))
        out["gamma5_squared"] = _max_abs(b.gamma5 @ b.gamma5 - eye)
        out["gamma5_hermitian"] = _max_abs(b.gamma5 - self.adjoint(b.gamma5))
        for i in range(3):
            for j in range(i, 3):
                lhs = self.anticommutator(b.alpha[i], b.alpha[j])
                out[f"alpha{i + 1}_alpha{j + 1}"] = _max_abs(lhs - 2.0 * (i == j) * eye)
            out[f"alpha{i + 1}_beta"] = _max_abs(self.anticommutator(b.alpha[i], b.beta))
        out["beta_squared"] = _max_abs(b.beta @ b.beta - eye)
        gamma_factor = self.gamma_factor()
        out["Gamma_squared"] = _max_abs(gamma_factor @ gamma_factor - eye)
        out["Gamma_hermitian"] = _max_abs(gamma_factor - self.adjoint(gamma_factor))
        basis = b.stacked_basis
        gram = np.einsum("aji,bji->ab", basis.conj(), basis)
        out["trace_orthogonality"] = _max_abs(gram - 4.0 * np.eye(16))
        return out

    def gamma5_product_phase(self) -> complex:
        """Phase z with gamma^0 gamma^1 gamma^2 gamma^3 = z gamma5 (here -i)."""
        b = self._basis
        product = b.gamma[0] @ b.gamma[1] @ b.gamma[2] @ b.gamma[3]
        return complex(np.trace(self.adjoint(b.gamma5) @ product) / 4.0)
