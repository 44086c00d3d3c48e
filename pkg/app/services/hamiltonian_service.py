"""
Hamiltonian service: H(p) and the operators derived from it at fixed momentum.
"""
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from app.constants import FD_MOMENTUM_STEP, FD_TIME_STEP, ErrorMessages, HamiltonianKind
from app.core.logging import get_logger
from app.core.singleton import Singleton
from app.models.base import ComplexMatrix4
from app.models.physics import (
    AnticommutatorIdentity,
    MomentumLike,
    MomentumVector,
    OperatorTriple,
    PhysicalConstants,
    SpectralDecomposition,
)
from app.services.clifford_service import CliffordService

logger = get_logger(__name__)

NATURAL = PhysicalConstants()

# fourth-order central first derivative: offsets and weights over 12 h
STENCIL_OFFSETS: Tuple[int, ...] = (-2, -1, 1, 2)
STENCIL_WEIGHTS: Tuple[float, ...] = (1.0, -8.0, 8.0, -1.0)

# a rank-m projector in four dimensions has a column of norm >= sqrt(m / 4) >= 1/2
FRAME_SEED_NORM = 0.25


def _max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def _both_halves(block: np.ndarray) -> np.ndarray:
    """Block-diagonal (..., 4, 4) carrying the (..., 2, 2) block on both halves."""
    out = np.zeros(block.shape[:-2] + (4, 4), dtype=np.complex128)
    out[..., :2, :2] = block
    out[..., 2:, 2:] = block
    return out


class HamiltonianService(metaclass=Singleton):
    """Service for the nonrelativistic spin-1/2 Hamiltonian and its identities."""

    def __init__(self, clifford_service: CliffordService):
        """
        Initialize the Hamiltonian service.

        Args:
            clifford_service: Clifford service providing the Dirac matrices
        """
        self._clifford = clifford_service
        basis = clifford_service.dirac_representation()
        self._identity = basis.identity
        self._beta = basis.beta
        self._alpha = np.stack(basis.alpha)
        self._gamma = clifford_service.gamma_factor()

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def gamma_factor(self) -> ComplexMatrix4:
        """Gamma = -i beta gamma5 (Hermitian, squares to I)."""
        return self._gamma.copy()

    def batch_hamiltonian(
        self,
        kind: HamiltonianKind,
        momenta: np.ndarray,
        k: PhysicalConstants = NATURAL,
    ) -> np.ndarray:
        """
        Hamiltonian of the chosen model for an array of momenta.

        Args:
            kind: paper, dirac or pauli
            momenta: Array of shape (..., 3)
            k: Physical constants

        Returns:
            np.ndarray: Matrices of shape (..., 4, 4)
        """
        p = np.asarray(momenta, dtype=float)
        if kind == HamiltonianKind.PAULI:
            return _both_halves(self.batch_pauli(p, k))
        kin = self.kinetic(p, k)
        out = k.c * np.einsum("...k,kij->...ij", p, self._alpha) + k.rest_energy * self._beta
        if kind == HamiltonianKind.PAPER:
            out = out + kin[..., None, None] * self._gamma
        return out

    def build_hamiltonian(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> ComplexMatrix4:
        """
        H = c alpha.p + m0 c^2 beta + Gamma p^2 / 2m0.

        Args:
            p: Momentum, units of m0 c
            k: Physical constants

        Returns:
            ComplexMatrix4: Hermitian 4x4 matrix
        """
        return self.batch_hamiltonian(HamiltonianKind.PAPER, MomentumVector.of(p).array, k)

    def dirac_hamiltonian(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> ComplexMatrix4:
        return self.batch_hamiltonian(HamiltonianKind.DIRAC, MomentumVector.of(p).array, k)

    def pauli_hamiltonian(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> np.ndarray:
        """(p^2 / 2m0) I on a two-component spinor, shape (2, 2)."""
        return self.batch_pauli(MomentumVector.of(p).array, k)

    def batch_pauli(self, momenta: np.ndarray, k: PhysicalConstants = NATURAL) -> np.ndarray:
        """Two-component Pauli Hamiltonians for momenta of shape (..., 3), shape (..., 2, 2)."""
        return self.kinetic(momenta, k)[..., None, None] * np.eye(2, dtype=np.complex128)

    def model_hamiltonian(
        self, kind: HamiltonianKind, p: MomentumLike, k: PhysicalConstants = NATURAL
    ) -> ComplexMatrix4:
        """4x4 Hamiltonian of any model; pauli acts on both halves of the spinor."""
        return self.batch_hamiltonian(kind, MomentumVector.of(p).array, k)

    @staticmethod
    def kinetic(momenta: np.ndarray, k: PhysicalConstants = NATURAL) -> np.ndarray:
        """p^2 / 2m0 for momenta of shape (..., 3), as it enters H."""
        p = np.asarray(momenta, dtype=float)
        return np.einsum("...k,...k->...", p, p) / (2.0 * k.m0)

    @classmethod
    def energy(cls, p: MomentumLike, k: PhysicalConstants = NATURAL) -> float:
        """E = sqrt(H^2) = m0 c^2 + p^2 / 2m0."""
        return k.rest_energy + float(cls.kinetic(MomentumVector.of(p).array, k))

    @staticmethod
    def relativistic_energy(p: MomentumLike, k: PhysicalConstants = NATURAL) -> float:
        """E = sqrt(c^2 p^2 + m0^2 c^4)."""
        return float(np.sqrt(k.c**2 * MomentumVector.of(p).squared + k.rest_energy**2))

    @staticmethod
    def dispersion(
        kind: HamiltonianKind, p_abs: np.ndarray, k: PhysicalConstants = NATURAL
    ) -> np.ndarray:
        """
        Positive-energy branch E(|p|) of each model.

        Args:
            kind: paper, dirac or pauli
            p_abs: Momentum magnitudes
            k: Physical constants

        Returns:
            np.ndarray: Energies with the shape of p_abs
        """
        p_abs = np.asarray(p_abs, dtype=float)
        kin = p_abs**2 / (2.0 * k.m0)
        if kind == HamiltonianKind.PAPER:
            return k.rest_energy + kin
        if kind == HamiltonianKind.DIRAC:
            return np.sqrt((k.c * p_abs) ** 2 + k.rest_energy**2)
        return kin

    def group_velocity(
        self, kind: HamiltonianKind, momenta: np.ndarray, k: PhysicalConstants = NATURAL
    ) -> np.ndarray:
        """dE/dp of the positive branch, shape (..., 3)."""
        p = np.asarray(momenta, dtype=float)
        if kind == HamiltonianKind.DIRAC:
            e = self.dispersion(kind, np.linalg.norm(p, axis=-1), k)
            return k.c**2 * p / e[..., None]
        return p / k.m0

    def batch_velocity(
        self,
        kind: HamiltonianKind,
        momenta: np.ndarray,
        axis: int,
        k: PhysicalConstants = NATURAL,
    ) -> np.ndarray:
        """dH/dp_axis for an array of momenta, shape (..., 4, 4)."""
        p = np.asarray(momenta, dtype=float)[..., axis]
        if kind == HamiltonianKind.PAULI:
            return _both_halves((p / k.m0)[..., None, None] * np.eye(2, dtype=np.complex128))
        out = np.broadcast_to(k.c * self._alpha[axis], p.shape + (4, 4))
        if kind == HamiltonianKind.PAPER:
            out = out + (p / k.m0)[..., None, None] * self._gamma
        return np.array(out)

    def batch_spectrum(
        self,
        kind: HamiltonianKind,
        momenta: np.ndarray,
        k: PhysicalConstants = NATURAL,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Batched Hermitian eigendecomposition.

        Args:
            kind: paper, dirac or pauli
            momenta: Array of shape (..., 3)
            k: Physical constants

        Returns:
            Eigenvalues (..., 4) in descending order and eigenvectors (..., 4, 4) as columns
        """
        w, v = np.linalg.eigh(self.batch_hamiltonian(kind, momenta, k))
        return w[..., ::-1], v[..., ::-1]

    def batch_eta(
        self,
        kind: HamiltonianKind,
        momenta: np.ndarray,
        axis: int,
        k: PhysicalConstants = NATURAL,
    ) -> np.ndarray:
        """
        eta = v - H^-1 E dE/dp for models with H^2 = E^2 (paper and dirac).

        Uses H^-1 = H / E^2.
        """
        p = np.asarray(momenta, dtype=float)
        e = self.dispersion(kind, np.linalg.norm(p, axis=-1), k)
        g = self.group_velocity(kind, p, k)[..., axis]
        h = self.batch_hamiltonian(kind, p, k)
        return self.batch_velocity(kind, p, axis, k) - (g / e)[..., None, None] * h

    # ------------------------------------------------------------------
    # Spectral operations
    # ------------------------------------------------------------------

    def spectrum(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> SpectralDecomposition:
        """
        Eigen-decomposition of H(p).

        Degenerate pairs are replaced by the Gram-Schmidt orthonormalization of
        the subspace projector applied to the unit vectors, so the result does
        not depend on the eigensolver's choice inside a degenerate subspace.

        Args:
            p: Momentum
            k: Physical constants

        Returns:
            SpectralDecomposition: Eigenvalues descending, eigenvectors as columns
        """
        w, v = np.linalg.eigh(self.build_hamiltonian(p, k))
        w, v = w[::-1], v[:, ::-1]
        vectors = np.empty_like(v)
        for block in (slice(0, 2), slice(2, 4)):
            sub = v[:, block]
            projector = sub @ sub.conj().T
            vectors[:, block] = self._canonical_frame(projector, block.stop - block.start)
        return SpectralDecomposition(eigenvalues=w, eigenvectors=vectors)

    @staticmethod
    def _canonical_frame(projector: np.ndarray, rank: int) -> np.ndarray:
        """
        Gram-Schmidt on the projector columns in canonical basis order.

        A column joins the frame when its part orthogonal to the frame has norm
        at least FRAME_SEED_NORM; columns below it are skipped.
        """
        frame: List[np.ndarray] = []
        for column in projector.T:
            if len(frame) == rank:
                break
            u = column.copy()
            # two passes against rounding
            for _ in range(2):
                for f in frame:
                    u = u - (f.conj() @ u) * f
            norm = np.linalg.norm(u)
            if norm >= FRAME_SEED_NORM:
                frame.append(u / norm)
        return np.stack(frame, axis=1)

    def _function_of_h(
        self, p: MomentumLike, k: PhysicalConstants, function: Callable[[np.ndarray], np.ndarray]
    ) -> np.ndarray:
        return self.spectrum(p, k).apply(function)

    def inverse(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> ComplexMatrix4:
        """H^-1 from the spectrum (eigenvalues are bounded away from 0 by m0 c^2)."""
        return self._function_of_h(p, k, lambda w: 1.0 / w)

    def propagator(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> ComplexMatrix4:
        """
        U(t) = exp(-i H t / hbar) through the spectral decomposition.

        Raises:
            ValueError: If t is not finite
        """
        self._require_finite(t)
        return self._function_of_h(p, k, lambda w: np.exp(-1j * w * t / k.hbar))

    def heisenberg(
        self, op: np.ndarray, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> np.ndarray:
        """U^dagger(t) op U(t)."""
        u = self.propagator(p, k, t)
        return u.conj().T @ op @ u

    @staticmethod
    def _require_finite(t: float) -> None:
        if not np.isfinite(t):
            raise ValueError(ErrorMessages.NONFINITE_TIME.format(t=t))

    # ------------------------------------------------------------------
    # Velocity, eta and their identities
    # ------------------------------------------------------------------

    def velocity_operator(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> OperatorTriple:
        """
        v_i = Gamma p_i / m0 + c alpha_i.

        Args:
            p: Momentum
            k: Physical constants

        Returns:
            OperatorTriple: Velocity components, units of c
        """
        vec = MomentumVector.of(p).array
        return OperatorTriple(
            components=tuple(
                self._gamma * (vec[i] / k.m0) + k.c * self._alpha[i] for i in range(3)
            ),
            unit="c",
        )

    def velocity_gradient_residual(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, step: float = FD_MOMENTUM_STEP
    ) -> float:
        """Largest deviation of v_i from the central difference of H along p_i."""
        vec = MomentumVector.of(p).array
        velocity = self.velocity_operator(vec, k)
        worst = 0.0
        for i in range(3):
            shift = np.zeros(3)
            shift[i] = step
            gradient = (
                self.build_hamiltonian(vec + shift, k) - self.build_hamiltonian(vec - shift, k)
            ) / (2.0 * step)
            worst = max(worst, _max_abs(gradient - velocity[i]))
        return worst

    def square_residual(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> float:
        """
        max |H^2 - (m0^2 c^4 + c^2 p^2 + p^4 / 4 m0^2) I|.

        The product is formed in extended precision from the float64 entries of H.
        """
        vec = MomentumVector.of(p).array
        h = self.build_hamiltonian(vec, k).astype(np.clongdouble)
        rest = np.longdouble(k.rest_energy)
        cp = (k.c * vec).astype(np.longdouble)
        kin = np.longdouble(self.kinetic(vec, k))
        scalar = rest * rest + np.sum(cp * cp) + kin * kin
        return float(np.max(np.abs(h @ h - scalar * np.eye(4, dtype=np.clongdouble))))

    def anticommutator_identity(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL
    ) -> AnticommutatorIdentity:
        """
        {H, v_i} against (2/m0) E p_i for E = m0 c^2 + p^2/2m0 and E = sqrt(c^2 p^2 + m0^2 c^4).

        Args:
            p: Momentum
            k: Physical constants

        Returns:
            AnticommutatorIdentity: Both sides and both residuals
        """
        vec = MomentumVector.of(p).array
        h = self.build_hamiltonian(vec, k)
        velocity = self.velocity_operator(vec, k)
        eye = self._identity
        e_exact = self.energy(vec, k)
        e_printed = self.relativistic_energy(vec, k)

        h_wide = h.astype(np.clongdouble)
        lhs, rhs_exact, rhs_paper = [], [], []
        residual_exact = residual_paper = 0.0
        for i in range(3):
            v_wide = np.asarray(velocity[i]).astype(np.clongdouble)
            anti = h_wide @ v_wide + v_wide @ h_wide
            exact = (2.0 / k.m0) * e_exact * vec[i] * eye
            printed = (2.0 / k.m0) * e_printed * vec[i] * eye
            residual_exact = max(residual_exact, _max_abs(anti - exact.astype(np.clongdouble)))
            residual_paper = max(residual_paper, _max_abs(anti - printed.astype(np.clongdouble)))
            lhs.append(anti.astype(np.complex128))
            rhs_exact.append(exact)
            rhs_paper.append(printed)
        return AnticommutatorIdentity(
            lhs=OperatorTriple(components=tuple(lhs), unit="m0 c^3"),
            rhs_exact=OperatorTriple(components=tuple(rhs_exact), unit="m0 c^3"),
            rhs_paper=OperatorTriple(components=tuple(rhs_paper), unit="m0 c^3"),
            residual_exact=residual_exact,
            residual_paper=residual_paper,
        )

    def eta_operator(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> OperatorTriple:
        """
        eta_i = v_i - H^-1 E p_i / m0 with E = sqrt(H^2) = m0 c^2 + p^2/2m0.

        Args:
            p: Momentum
            k: Physical constants

        Returns:
            OperatorTriple: Hermitian components anticommuting with H
        """
        vec = MomentumVector.of(p).array
        h_inv = self.inverse(vec, k)
        e = self.energy(vec, k)
        velocity = self.velocity_operator(vec, k)
        return OperatorTriple(
            components=tuple(velocity[i] - h_inv * (e * vec[i] / k.m0) for i in range(3)),
            unit="c",
        )

    def eta_anticommutator_residual(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> float:
        """max_i |{H, eta_i}|."""
        h = self.build_hamiltonian(p, k)
        eta = self.eta_operator(p, k)
        return max(_max_abs(self._clifford.anticommutator(h, e)) for e in eta)

    def eta_evolution(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> OperatorTriple:
        """eta_i(t) = exp(2 i H t / hbar) eta_i(0)."""
        self._require_finite(t)
        phase = self._function_of_h(p, k, lambda w: np.exp(2j * w * t / k.hbar))
        return OperatorTriple(
            components=tuple(phase @ e for e in self.eta_operator(p, k)), unit="c"
        )

    def eta_evolution_residual(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> float:
        """Deviation of eta_evolution from the Heisenberg-picture U^dagger eta U."""
        closed = self.eta_evolution(p, k, t)
        eta = self.eta_operator(p, k)
        return max(
            _max_abs(closed[i] - self.heisenberg(np.asarray(eta[i]), p, k, t)) for i in range(3)
        )

    def velocity_derivative_identity(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL
    ) -> float:
        """Residual of (i/hbar)[H, v_i] = (2i/hbar) H eta_i."""
        h = self.build_hamiltonian(p, k)
        velocity = self.velocity_operator(p, k)
        eta = self.eta_operator(p, k)
        return max(
            _max_abs(
                (1j / k.hbar) * self._clifford.commutator(h, velocity[i])
                - (2j / k.hbar) * h @ eta[i]
            )
            for i in range(3)
        )

    # ------------------------------------------------------------------
    # Trajectories
    # ------------------------------------------------------------------

    def trajectory_closed_form(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> OperatorTriple:
        """
        Displacement q_i(t) - q_i(0) of the Heisenberg position operator.

        E H^-1 (p_i / m0) t - (i hbar / 2) H^-1 (exp(2iHt/hbar) - I) eta_i(0)

        Args:
            p: Momentum
            k: Physical constants
            t: Time

        Returns:
            OperatorTriple: Displacement components, units of length
        """
        self._require_finite(t)
        vec = MomentumVector.of(p).array
        h_inv = self.inverse(vec, k)
        e = self.energy(vec, k)
        oscillation = self._function_of_h(
            vec, k, lambda w: (np.exp(2j * w * t / k.hbar) - 1.0) / w
        )
        eta = self.eta_operator(vec, k)
        return OperatorTriple(
            components=tuple(
                h_inv * (e * vec[i] * t / k.m0) - (0.5j * k.hbar) * oscillation @ eta[i]
                for i in range(3)
            ),
            unit="length",
        )

    def trajectory_paper_literal(
        self, p: MomentumLike, k: PhysicalConstants = NATURAL, t: float = 0.0
    ) -> OperatorTriple:
        """
        The printed trajectory E H^-1 (p_i/m0) t - (i c hbar/2) H^-1 exp(2iHt/hbar) eta_i(t).

        E is sqrt(c^2 p^2 + m0^2 c^4) and eta_i(t) = exp(2iHt/hbar) eta_i(0).
        """
        self._require_finite(t)
        vec = MomentumVector.of(p).array
        h_inv = self.inverse(vec, k)
        e = self.relativistic_energy(vec, k)
        phase = self._function_of_h(vec, k, lambda w: np.exp(2j * w * t / k.hbar))
        eta_t = self.eta_evolution(vec, k, t)
        return OperatorTriple(
            components=tuple(
                h_inv * (e * vec[i] * t / k.m0)
                - (0.5j * k.c * k.hbar) * h_inv @ phase @ eta_t[i]
                for i in range(3)
            ),
            unit="length",
        )

    def trajectory_derivative_residual(
        self,
        p: MomentumLike,
        k: PhysicalConstants = NATURAL,
        t: float = 0.0,
        step: float = FD_TIME_STEP,
        literal: bool = False,
    ) -> float:
        """
        Deviation of d/dt of a trajectory from the Heisenberg velocity U^dagger v U.

        Uses the fourth-order central stencil.

        Args:
            p: Momentum
            k: Physical constants
            t: Time of the comparison
            step: Stencil step
            literal: Differentiate the printed expression instead of the corrected one

        Returns:
            float: max_i of the entrywise deviation
        """
        trajectory = self.trajectory_paper_literal if literal else self.trajectory_closed_form
        samples = [np.stack(trajectory(p, k, t + s * step).components) for s in STENCIL_OFFSETS]
        derivative = sum(w * s for w, s in zip(STENCIL_WEIGHTS, samples)) / (12.0 * step)
        velocity = self.velocity_operator(p, k)
        heisenberg = np.stack([self.heisenberg(np.asarray(v), p, k, t) for v in velocity])
        return _max_abs(derivative - heisenberg)

    def rest_frame_limits(self, k: PhysicalConstants = NATURAL) -> Dict[str, float]:
        """
        Residuals of the p = 0 limits.

        P_i = m0 v_i(0) = m0 c alpha_i, and Q_i = -(i hbar / 2 m0 c) beta alpha_i equals
        the oscillating position term -(i hbar / 2) H^-1 eta_i(0) at t = 0.
        """
        origin = np.zeros(3)
        velocity = self.velocity_operator(origin, k)
        h_inv = self.inverse(origin, k)
        eta = self.eta_operator(origin, k)
        momentum_residual = max(
            _max_abs(k.m0 * velocity[i] - k.m0 * k.c * self._alpha[i]) for i in range(3)
        )
        position_residual = max(
            _max_abs(
                -(0.5j * k.hbar) * h_inv @ eta[i]
                - (-0.5j * k.hbar / (k.m0 * k.c)) * self._beta @ self._alpha[i]
            )
            for i in range(3)
        )
        hamiltonian_residual = _max_abs(
            self.build_hamiltonian(origin, k) - k.rest_energy * self._beta
        )
        return {
            "rest_hamiltonian": hamiltonian_residual,
            "rest_momentum": momentum_residual,
            "rest_position": position_residual,
        }

    def hermiticity_residual(self, p: MomentumLike, k: PhysicalConstants = NATURAL) -> float:
        h = self.build_hamiltonian(p, k)
        return _max_abs(h - self._clifford.adjoint(h))

    def spectrum_residual(
        self,
        p: MomentumLike,
        k: PhysicalConstants = NATURAL,
        spectral: Optional[SpectralDecomposition] = None,
    ) -> Dict[str, float]:
        """
        Relative eigenvalue error against +-E and the decomposition's own residuals.

        Returns:
            Dict[str, float]: eigenvalue, orthonormality, reconstruction and projector residuals
        """
        spectral = spectral or self.spectrum(p, k)
        e = self.energy(p, k)
        expected = np.array([e, e, -e, -e])
        plus = spectral.projector(+1)
        minus = spectral.projector(-1)
        return {
            "eigenvalue": float(np.max(np.abs(spectral.eigenvalues - expected)) / e),
            "orthonormality": spectral.orthonormality_residual(),
            "reconstruction": _max_abs(spectral.reconstruct() - self.build_hamiltonian(p, k)),
            "projector": max(_max_abs(plus @ plus - plus), _max_abs(minus @ minus - minus)),
        }
