"""
Lie-algebra service: closure, structure constants, Jacobi identity and Killing
signature of the rest-frame operators, with the canonical so(4,2) oracle.
"""
import itertools
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from app.constants import (
    SO42_DIMENSION,
    TOL_CLOSURE,
    TOL_JACOBI,
    TOL_KILLING_ZERO,
    ErrorMessages,
)
from app.core.exceptions import ClosureError, ConfigError, LabError
from app.core.logging import get_logger
from app.core.singleton import Singleton
from app.models.algebra import (
    ClosureReport,
    ClosureResult,
    Generator,
    GeneratorSet,
    KillingSignature,
    OracleResult,
    RealFormEntry,
    StructureConstants,
)
from app.models.physics import PhysicalConstants
from app.services.clifford_service import CliffordService

logger = get_logger(__name__)

REAL = "real"
COMPLEX = "complex"

SO42_METRIC: Tuple[float, ...] = (1.0, 1.0, 1.0, 1.0, -1.0, -1.0)
SO42_LABEL = "so(4,2)-compatible signature"
NOT_IDENTIFIED = "not identified"

# Killing signatures (n_pos, n_neg, n_zero) of the real forms of sl(4, C)
REAL_FORM_LABELS: Dict[Tuple[int, int, int], str] = {
    (0, 15, 0): "su(4) = so(6)",
    (6, 9, 0): "su(3,1)",
    (8, 7, 0): "su(2,2) = so(4,2)",
    (9, 6, 0): "sl(4,R) = so(3,3)",
    (5, 10, 0): "sl(2,H) = so(5,1)",
}


class LieAlgebraService(metaclass=Singleton):
    """Service for the rest-frame dynamical-symmetry analysis."""

    def __init__(self, clifford_service: CliffordService):
        """
        Initialize Lie-algebra service.

        Args:
            clifford_service: Clifford service providing the Dirac matrices and basis
        """
        self._clifford = clifford_service

    # ------------------------------------------------------------------
    # Generators
    # ------------------------------------------------------------------

    def rest_frame_generators(
        self,
        k: PhysicalConstants = PhysicalConstants(),
        literal_spin: bool = False,
        drop: Optional[str] = None,
    ) -> GeneratorSet:
        """
        The 15 dimensionless rest-frame operators with their physical prefactors.

        beta; S_k = Sigma_k / 2; alpha_i; Q_i = -(i/2) beta alpha_i; i gamma5; beta gamma5;
        i beta S_k.

        Args:
            k: Physical constants (prefactor metadata only)
            literal_spin: Build S_k from -alpha_i alpha_j / 2 instead of Sigma_k / 2
            drop: Name of a generator or family to leave out

        Returns:
            GeneratorSet: Generators in analysis order

        Raises:
            ConfigError: If drop names no generator or family
        """
        basis = self._clifford.dirac_representation()
        beta, alpha, gamma5 = basis.beta, basis.alpha, basis.gamma5
        spins = self._clifford.spin_matrices(literal=literal_spin)
        compton = k.hbar / (k.m0 * k.c)

        generators: List[Generator] = [
            Generator(
                name="H0",
                family="H0",
                matrix=beta,
                prefactor="m0 c^2",
                prefactor_value=k.rest_energy,
            )
        ]
        generators += [
            Generator(
                name=f"S{i + 1}", family="S", matrix=s / 2, prefactor="hbar", prefactor_value=k.hbar
            )
            for i, s in enumerate(spins)
        ]
        generators += [
            Generator(
                name=f"P{i + 1}", family="P", matrix=a, prefactor="m0 c", prefactor_value=k.m0 * k.c
            )
            for i, a in enumerate(alpha)
        ]
        generators += [
            Generator(
                name=f"Q{i + 1}",
                family="Q",
                matrix=-0.5j * beta @ a,
                prefactor="hbar/(m0 c)",
                prefactor_value=compton,
            )
            for i, a in enumerate(alpha)
        ]
        generators.append(Generator(name="i_gamma5", family="i_gamma5", matrix=1j * gamma5))
        generators.append(
            Generator(name="beta_gamma5", family="beta_gamma5", matrix=beta @ gamma5)
        )
        generators += [
            Generator(
                name=f"i_beta_S{i + 1}",
                family="i_beta_S",
                matrix=0.5j * beta @ s,
                prefactor="hbar",
                prefactor_value=k.hbar,
            )
            for i, s in enumerate(spins)
        ]

        if drop:
            known = [g.name for g in generators] + sorted({g.family for g in generators})
            if drop not in known:
                raise ConfigError(
                    ErrorMessages.UNKNOWN_GENERATOR.format(name=drop, known=", ".join(known))
                )
            generators = [g for g in generators if drop not in (g.name, g.family)]
            logger.info("Dropped %s; %d generators remain", drop, len(generators))
        return GeneratorSet(generators=tuple(generators))

    def gram_rank(self, g: GeneratorSet, tol: float = 1e-9) -> int:
        """Rank of the Gram matrix Tr(X_a^dagger X_b)."""
        x = g.matrices()
        gram = np.einsum("aji,bji->ab", x.conj(), x)
        scale = max(1.0, float(np.max(np.abs(gram))))
        return int(np.linalg.matrix_rank(gram, tol=tol * scale, hermitian=True))

    def beta_adjoint_real_form(self, g: GeneratorSet, tol: float = TOL_CLOSURE) -> GeneratorSet:
        """
        Rephase every generator so that beta X^dagger beta = -X.

        Generators with beta X^dagger beta = X are multiplied by i.

        Args:
            g: Generator set of 4x4 matrices
            tol: Tolerance of the adjoint test

        Returns:
            GeneratorSet: Generators of the Dirac-adjoint-preserving real form
        """
        beta = self._clifford.dirac_representation().beta
        out: List[Generator] = []
        for gen in g.generators:
            adjoint = beta @ self._clifford.adjoint(gen.matrix) @ beta
            if np.max(np.abs(adjoint - gen.matrix)) <= tol:
                out.append(gen.scaled(1j))
            else:
                if np.max(np.abs(adjoint + gen.matrix)) > tol:
                    logger.warning("%s has no definite beta-adjoint parity", gen.name)
                out.append(gen)
        return GeneratorSet(generators=tuple(out))

    # ------------------------------------------------------------------
    # Structure constants
    # ------------------------------------------------------------------

    def _coordinates(self, matrices: np.ndarray) -> np.ndarray:
        """Linear coordinates of (..., d, d) matrices: Dirac basis for d = 4, entries otherwise."""
        d = matrices.shape[-1]
        if d == 4:
            return self._clifford.basis_decompose(matrices)
        return matrices.reshape(matrices.shape[:-2] + (d * d,)).astype(np.complex128)

    def structure_constants(
        self, g: GeneratorSet, field: str = REAL
    ) -> Tuple[StructureConstants, np.ndarray]:
        """
        Least-squares structure constants and the out-of-span residual of every pair.

        Args:
            g: Generator set
            field: 'real' restricts coefficients to real numbers, 'complex' allows any

        Returns:
            StructureConstants and a (n, n) array of residuals max |sum_c f X_c - [X_a, X_b]|
        """
        x = g.matrices()
        n = x.shape[0]
        products = np.einsum("aij,bjk->abik", x, x)
        commutators = products - np.swapaxes(products, 0, 1)

        design = self._coordinates(x).T
        target = self._coordinates(commutators).reshape(n * n, -1).T
        if field == REAL:
            design = np.vstack([design.real, design.imag])
            target = np.vstack([target.real, target.imag])
        solution = scipy.linalg.pinv(design) @ target
        values = solution.T.reshape(n, n, n)

        upper = np.triu(np.ones((n, n), dtype=bool), k=1)
        antisymmetric = np.zeros_like(values)
        antisymmetric[upper] = values[upper]
        antisymmetric -= np.swapaxes(antisymmetric, 0, 1)

        reconstructed = np.einsum("abc,cij->abij", antisymmetric, x)
        residuals = np.max(np.abs(reconstructed - commutators), axis=(2, 3))
        constants = StructureConstants(values=antisymmetric, labels=tuple(g.names), field=field)
        return constants, residuals

    def closure_check(
        self,
        g: GeneratorSet,
        field: str = REAL,
        tol: float = TOL_CLOSURE,
        strict: bool = False,
    ) -> ClosureResult:
        """
        Decide whether the span of g is closed under commutation.

        Args:
            g: Generator set
            field: 'real' or 'complex' coefficient field
            tol: Largest accepted out-of-span residual
            strict: Raise ClosureError on failure instead of reporting it

        Returns:
            ClosureResult: Structure constants, max residual and the worst pair

        Raises:
            ClosureError: If strict and the residual exceeds tol
        """
        constants, residuals = self.structure_constants(g, field)
        a, b = np.unravel_index(int(np.argmax(residuals)), residuals.shape)
        worst = float(residuals[a, b])
        pair = (g.names[a], g.names[b])
        passed = worst <= tol
        if not passed:
            message = ErrorMessages.CLOSURE_FAILED.format(a=pair[0], b=pair[1], residual=worst)
            if strict:
                raise ClosureError(message, pair, worst)
            logger.debug("%s closure: %s", field, message)
        return ClosureResult(
            structure_constants=constants,
            max_residual=worst,
            worst_pair=pair if worst > 0 else None,
            passed=passed,
        )

    @staticmethod
    def jacobi_check(f: StructureConstants) -> float:
        """max |f_abe f_ecd + f_bce f_ead + f_cae f_ebd| over (a, b, c, d)."""
        v = f.values
        total = (
            np.einsum("abe,ecd->abcd", v, v)
            + np.einsum("bce,ead->abcd", v, v)
            + np.einsum("cae,ebd->abcd", v, v)
        )
        return float(np.max(np.abs(total))) if total.size else 0.0

    @staticmethod
    def killing_matrix(f: StructureConstants) -> np.ndarray:
        """B_ab = sum_cd f_acd f_bdc."""
        return np.einsum("acd,bdc->ab", f.values, f.values)

    def killing_signature(
        self, f: StructureConstants, zero_tol: float = TOL_KILLING_ZERO
    ) -> KillingSignature:
        """
        Eigenvalue sign counts of the Killing matrix.

        Args:
            f: Real structure constants of a closed algebra
            zero_tol: Eigenvalues below this magnitude count as zero

        Returns:
            KillingSignature: (n_pos, n_neg, n_zero) and the symmetry residual

        Raises:
            LabError: If the Killing matrix is not real
        """
        killing = self.killing_matrix(f)
        imaginary = float(np.max(np.abs(np.imag(killing)))) if killing.size else 0.0
        if imaginary > zero_tol:
            raise LabError(ErrorMessages.NOT_A_REAL_FORM.format(imag=imaginary))
        killing = np.real(killing)
        symmetry = float(np.max(np.abs(killing - killing.T))) if killing.size else 0.0
        eigenvalues = np.linalg.eigvalsh(0.5 * (killing + killing.T))
        return KillingSignature(
            n_pos=int(np.sum(eigenvalues > zero_tol)),
            n_neg=int(np.sum(eigenvalues < -zero_tol)),
            n_zero=int(np.sum(np.abs(eigenvalues) <= zero_tol)),
            symmetry_residual=symmetry,
        )

    def canonical_so42_oracle(self, metric: Sequence[float] = SO42_METRIC) -> OracleResult:
        """
        Ground truth from the 6x6 generators M_ab = E_ab eta - E_ba eta, a < b.

        Args:
            metric: Diagonal of eta, diag(+,+,+,+,-,-) by default

        Returns:
            OracleResult: Structure constants, Killing signature and compact dimension
        """
        eta = np.diag(np.asarray(metric, dtype=float))
        d = eta.shape[0]
        generators = []
        for a, b in itertools.combinations(range(d), 2):
            unit = np.zeros((d, d))
            unit[a, b] = 1.0
            generators.append(
                Generator(name=f"M{a}{b}", family="M", matrix=unit @ eta - unit.T @ eta)
            )
        g = GeneratorSet(generators=tuple(generators))
        closure = self.closure_check(g, REAL)
        constants = closure.structure_constants
        signature = self.killing_signature(constants)
        return OracleResult(
            structure_constants=constants,
            signature=signature,
            jacobi_residual=self.jacobi_check(constants),
            closure_residual=closure.max_residual,
            compact_dimension=signature.n_neg,
        )

    def real_form_scan(self, g: GeneratorSet, tol: float = TOL_CLOSURE) -> List[RealFormEntry]:
        """
        Closure and Killing signature for every phase {1, i} per operator family.

        Args:
            g: Generator set
            tol: Closure tolerance

        Returns:
            List[RealFormEntry]: One entry per assignment, in binary order of the families
        """
        families = g.families
        entries: List[RealFormEntry] = []
        for choice in itertools.product((False, True), repeat=len(families)):
            rotated = {fam for fam, flag in zip(families, choice) if flag}
            scaled = GeneratorSet(
                generators=tuple(
                    gen.scaled(1j) if gen.family in rotated else gen for gen in g.generators
                )
            )
            closure = self.closure_check(scaled, REAL, tol)
            signature = None
            label = ""
            if closure.passed:
                signature = self.killing_signature(closure.structure_constants).as_tuple()
                label = REAL_FORM_LABELS.get(signature, "unlisted")
            entries.append(
                RealFormEntry(
                    phases=tuple(
                        (fam, "i" if flag else "1") for fam, flag in zip(families, choice)
                    ),
                    closed=closure.passed,
                    closure_residual=closure.max_residual,
                    signature=signature,
                    label=label,
                )
            )
        return entries

    # ------------------------------------------------------------------
    # Full analysis
    # ------------------------------------------------------------------

    def analyze(
        self,
        k: PhysicalConstants = PhysicalConstants(),
        literal_spin: bool = False,
        drop: Optional[str] = None,
        closure_tol: float = TOL_CLOSURE,
        jacobi_tol: float = TOL_JACOBI,
        zero_tol: float = TOL_KILLING_ZERO,
        scan: bool = True,
    ) -> ClosureReport:
        """
        Run generators -> closure -> Jacobi -> Killing -> oracle identification.

        Args:
            k: Physical constants
            literal_spin: Use the anti-Hermitian spin matrices
            drop: Generator or family to leave out
            closure_tol: Closure tolerance
            jacobi_tol: Jacobi tolerance
            zero_tol: Killing zero threshold
            scan: Include the real-form scan

        Returns:
            ClosureReport: Summary of the analysis
        """
        literal = self.rest_frame_generators(k, literal_spin, drop)
        span_rank = self.gram_rank(literal)
        literal_real = self.closure_check(literal, REAL, closure_tol)
        literal_complex = self.closure_check(literal, COMPLEX, closure_tol)

        real_form = self.beta_adjoint_real_form(literal)
        closure = self.closure_check(real_form, REAL, closure_tol)
        constants = closure.structure_constants
        jacobi = self.jacobi_check(constants)
        signature = self.killing_signature(constants, zero_tol)
        oracle = self.canonical_so42_oracle()

        spins = [g.matrix for g in literal.generators if g.family == "S"]
        spin_hermiticity = max(
            (float(np.max(np.abs(s - self._clifford.adjoint(s)))) for s in spins), default=0.0
        )

        identified = (
            closure.passed
            and jacobi <= jacobi_tol
            and oracle.jacobi_residual <= jacobi_tol
            and len(real_form) == oracle.structure_constants.dimension == SO42_DIMENSION
            and span_rank == SO42_DIMENSION
            and signature.as_tuple() == oracle.signature.as_tuple()
        )
        label = SO42_LABEL if identified else NOT_IDENTIFIED
        logger.info(
            "Lie analysis: rank %d, closure %.3e, Jacobi %.3e, Killing %s (oracle %s): %s",
            span_rank,
            closure.max_residual,
            jacobi,
            signature.as_tuple(),
            oracle.signature.as_tuple(),
            label,
        )
        if not literal_real.passed:
            logger.warning(
                "Listed phases do not close over R (residual %.3e)", literal_real.max_residual
            )

        forms: Tuple[RealFormEntry, ...] = ()
        if scan:
            forms = tuple(e for e in self.real_form_scan(literal, closure_tol) if e.closed)
        return ClosureReport(
            span_rank=span_rank,
            dimension=len(real_form),
            max_closure_residual=closure.max_residual,
            worst_pair=closure.worst_pair,
            max_jacobi_residual=jacobi,
            killing_signature=signature.as_tuple(),
            oracle_signature=oracle.signature.as_tuple(),
            oracle_jacobi_residual=oracle.jacobi_residual,
            literal_real_residual=literal_real.max_residual,
            literal_complex_residual=literal_complex.max_residual,
            spin_hermiticity_residual=spin_hermiticity,
            identified=label,
            real_forms=forms,
        )
