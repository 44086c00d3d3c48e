"""
Dynamics service: Gaussian spinor packets on a momentum grid, exact per-mode
evolution, expectation values and Zitterbewegung extraction.
"""
from collections import OrderedDict
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import scipy.fft
import scipy.linalg
from scipy import signal

from app.constants import (
    ALIASING_EDGE_FRACTION,
    ALIASING_MASS,
    COVERAGE_SIGMAS,
    EHRENFEST_POINTS,
    FD_TIME_STEP,
    MIN_ZBW_PERIODS,
    MIN_ZBW_SAMPLES,
    MODE_CACHE_SIZE,
    RESOLUTION_POINTS,
    ZBW_AMPLITUDE_FLOOR,
    ZBW_PEAK_PROMINENCE,
    ZBW_ZERO_PADDING,
    ErrorMessages,
    HamiltonianKind,
)
from app.core.exceptions import ConfigError, GridCoverageError
from app.core.logging import get_logger
from app.core.singleton import Singleton
from app.models.dynamics import (
    MomentumGrid,
    ObservableSeries,
    PositionExpectation,
    SpinorField,
    ZbwReport,
)
from app.models.physics import MomentumLike, MomentumVector, PhysicalConstants
from app.services.hamiltonian_service import (
    NATURAL,
    STENCIL_OFFSETS,
    STENCIL_WEIGHTS,
    HamiltonianService,
)

logger = get_logger(__name__)

AXIS_NAMES: Tuple[str, str, str] = ("x", "y", "z")

# eighth-order central first derivative, weights for offsets 1..4
DERIVATIVE_WEIGHTS: Tuple[float, ...] = (4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0)

TIME_CHUNK = 64
CHUNK_ELEMENTS = 1 << 22

Modes = Tuple[np.ndarray, np.ndarray]
ModeKey = Tuple[MomentumGrid, HamiltonianKind, PhysicalConstants]


def _chunk_size(nodes: int) -> int:
    """Times per chunk so one chunk holds at most CHUNK_ELEMENTS amplitudes."""
    return max(1, min(TIME_CHUNK, CHUNK_ELEMENTS // (4 * nodes)))


class DynamicsService(metaclass=Singleton):
    """Service for spinor wavepacket evolution on a momentum grid."""

    def __init__(self, hamiltonian_service: HamiltonianService):
        """
        Initialize dynamics service.

        Args:
            hamiltonian_service: Hamiltonian service used for per-mode spectra
        """
        self._hamiltonian = hamiltonian_service
        self._modes: "OrderedDict[ModeKey, Modes]" = OrderedDict()

    # ------------------------------------------------------------------
    # Packets
    # ------------------------------------------------------------------

    def gaussian_packet(
        self,
        grid: MomentumGrid,
        p0: MomentumLike,
        sigma_p: float,
        spinor_weight: Sequence[complex],
    ) -> SpinorField:
        """
        Normalized Gaussian packet psi(p) = N exp(-(p - p0)^2 / 4 sigma_p^2) w.

        Args:
            grid: Momentum grid
            p0: Mean momentum; only the z component may be nonzero on a 1D grid
            sigma_p: Momentum width
            spinor_weight: Four spinor components (normalized internally)

        Returns:
            SpinorField: Packet with unit norm

        Raises:
            GridCoverageError: If p_max < |p0| + 6 sigma_p, or sigma_p spans fewer than
                two grid spacings
            ConfigError: For a nonpositive width, zero weight or transverse 1D momentum
        """
        center = MomentumVector.of(p0).array
        if not sigma_p > 0:
            raise ConfigError(ErrorMessages.NONPOSITIVE_WIDTH.format(sigma_p=sigma_p))
        weight = np.asarray(spinor_weight, dtype=np.complex128).reshape(4)
        weight_norm = np.linalg.norm(weight)
        if weight_norm == 0:
            raise ConfigError(ErrorMessages.ZERO_SPINOR_WEIGHT)
        if grid.dim == 1 and np.any(center[:2] != 0):
            raise ConfigError(ErrorMessages.TRANSVERSE_MOMENTUM_1D.format(p0=tuple(center)))
        needed = float(np.max(np.abs(center))) + COVERAGE_SIGMAS * sigma_p
        if grid.p_max < needed:
            raise GridCoverageError(
                ErrorMessages.GRID_TOO_SMALL.format(
                    p_max=grid.p_max, sigmas=COVERAGE_SIGMAS, needed=needed
                )
            )
        if sigma_p < RESOLUTION_POINTS * grid.spacing:
            raise GridCoverageError(
                ErrorMessages.GRID_TOO_COARSE.format(
                    sigma_p=sigma_p, points=RESOLUTION_POINTS, spacing=grid.spacing
                )
            )

        offset = grid.momenta() - center
        envelope = np.exp(-np.sum(offset**2, axis=-1) / (4.0 * sigma_p**2))
        values = envelope[..., None] * (weight / weight_norm)
        norm = np.sum(np.abs(values) ** 2) * grid.cell
        return SpinorField(grid=grid, values=values / np.sqrt(norm))

    # ------------------------------------------------------------------
    # Evolution
    # ------------------------------------------------------------------

    def mode_spectrum(
        self, grid: MomentumGrid, kind: HamiltonianKind, k: PhysicalConstants = NATURAL
    ) -> Modes:
        """
        Eigenvalues (M, 4) and eigenvectors (M, 4, 4) of every grid node.

        The last MODE_CACHE_SIZE spectra are kept, least recently used evicted first.
        """
        key = (grid, kind, k)
        if key in self._modes:
            self._modes.move_to_end(key)
            return self._modes[key]
        momenta = grid.momenta().reshape(-1, 3)
        modes = self._hamiltonian.batch_spectrum(kind, momenta, k)
        logger.debug("Diagonalized %d modes for the %s model", momenta.shape[0], kind.value)
        self._modes[key] = modes
        while len(self._modes) > MODE_CACHE_SIZE:
            self._modes.popitem(last=False)
        return modes

    def _eigen_amplitudes(self, field: SpinorField, modes: Modes) -> np.ndarray:
        _, vectors = modes
        flat = field.values.reshape(-1, 4)
        return np.einsum("mji,mj->mi", vectors.conj(), flat)

    def _states(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        times: np.ndarray,
        k: PhysicalConstants,
    ) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """Yield (times chunk, states of shape (T,) + grid.shape + (4,))."""
        modes = self.mode_spectrum(field.grid, kind, k)
        energies, vectors = modes
        amplitudes = self._eigen_amplitudes(field, modes)
        shape = field.grid.shape + (4,)
        size = _chunk_size(energies.shape[0])
        for start in range(0, len(times), size):
            chunk = np.asarray(times[start:start + size], dtype=float)
            phases = np.exp(-1j * energies[None] * chunk[:, None, None] / k.hbar)
            states = np.einsum("mij,tmj->tmi", vectors, phases * amplitudes[None])
            yield chunk, states.reshape((len(chunk),) + shape)

    def evolve(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        t: float,
        k: PhysicalConstants = NATURAL,
    ) -> SpinorField:
        """
        psi(p, t) = U_kind(p, t) psi(p, 0) node by node.

        Args:
            field: Initial field
            kind: paper, dirac or pauli
            t: Time
            k: Physical constants

        Returns:
            SpinorField: Evolved field
        """
        if not np.isfinite(t):
            raise ValueError(ErrorMessages.NONFINITE_TIME.format(t=t))
        if t == 0:
            return field
        _, states = next(self._states(field, kind, np.array([t]), k))
        return SpinorField(grid=field.grid, values=states[0])

    def evolve_series(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        times: Sequence[float],
        k: PhysicalConstants = NATURAL,
    ) -> List[SpinorField]:
        """Evolved fields at every time, from one diagonalization of the grid."""
        out: List[SpinorField] = []
        for _, states in self._states(field, kind, np.asarray(times, dtype=float), k):
            out.extend(SpinorField(grid=field.grid, values=s) for s in states)
        return out

    # ------------------------------------------------------------------
    # Expectation values
    # ------------------------------------------------------------------

    @staticmethod
    def _expect(values: np.ndarray, op: np.ndarray, cell: float, spatial_ndim: int) -> np.ndarray:
        applied = np.einsum("...ij,...j->...i", op, values)
        products = np.conj(values) * applied
        axes = tuple(range(products.ndim - spatial_ndim - 1, products.ndim))
        return np.sum(products, axis=axes) * cell

    def expect_operator(self, field: SpinorField, op: np.ndarray) -> complex:
        """
        sum_p psi^dagger(p) Op(p) psi(p) dp^dim.

        Args:
            field: Normalized field
            op: A single 4x4 matrix or one matrix per node, shape grid.shape + (4, 4)

        Returns:
            complex: The expectation value (real for Hermitian op up to rounding)
        """
        return complex(self._expect(field.values, np.asarray(op), field.grid.cell, field.grid.dim))

    def momentum_expectation(self, field: SpinorField) -> np.ndarray:
        """<p_i>, shape (3,)."""
        density = field.density()
        weights = density[..., None] * field.grid.momenta()
        axes = tuple(range(field.grid.dim))
        return np.sum(weights, axis=axes) / np.sum(density)

    def _position_from_states(
        self, states: np.ndarray, grid: MomentumGrid, k: PhysicalConstants
    ) -> Tuple[np.ndarray, np.ndarray]:
        """<q> and the boundary mass for states of shape (T,) + grid.shape + (4,)."""
        axes = tuple(range(1, grid.dim + 1))
        shifted = scipy.fft.ifftshift(states, axes=axes)
        transformed = scipy.fft.fftshift(scipy.fft.ifftn(shifted, axes=axes), axes=axes)
        density = np.sum(np.abs(transformed) ** 2, axis=-1)
        total = np.sum(density, axis=axes)
        x = grid.position_axis(k.hbar)
        edge = max(1, int(round(ALIASING_EDGE_FRACTION * grid.n_points)))

        position = np.zeros((states.shape[0], 3))
        boundary = np.zeros(states.shape[0])
        for grid_axis, cartesian in enumerate(grid.active_axes()):
            others = tuple(a for a in axes if a != grid_axis + 1)
            marginal = np.sum(density, axis=others) if others else density
            position[:, cartesian] = np.sum(marginal * x, axis=1) / total
            outer = np.sum(marginal[:, :edge], axis=1) + np.sum(marginal[:, -edge:], axis=1)
            boundary = np.maximum(boundary, outer / total)
        return position, boundary

    def _position_by_stencil(
        self, values: np.ndarray, grid: MomentumGrid, k: PhysicalConstants
    ) -> np.ndarray:
        """<i hbar d/dp_i> with the eighth-order periodic stencil."""
        out = np.zeros(3)
        spatial = tuple(range(grid.dim))
        for grid_axis, cartesian in enumerate(grid.active_axes()):
            derivative = np.zeros_like(values)
            for offset, weight in enumerate(DERIVATIVE_WEIGHTS, start=1):
                forward = np.roll(values, -offset, axis=grid_axis)
                backward = np.roll(values, offset, axis=grid_axis)
                derivative += weight * (forward - backward)
            derivative /= grid.spacing
            integrand = np.conj(values) * (1j * k.hbar * derivative)
            out[cartesian] = float(np.real(np.sum(integrand, axis=spatial + (grid.dim,))))
        return out * grid.cell

    def expect_position(
        self,
        field: SpinorField,
        k: PhysicalConstants = NATURAL,
        cross_check: bool = True,
    ) -> PositionExpectation:
        """
        <q_i> from the position representation.

        The field is transformed with a centred inverse discrete Fourier transform
        and <x_i> = sum x_i |psi(x)|^2 / sum |psi(x)|^2 is evaluated on the
        conjugate grid. The alternative stencil evaluation of i hbar d/dp_i is
        returned as a cross-check.

        Args:
            field: Normalized field
            k: Physical constants
            cross_check: Also evaluate the stencil path

        Returns:
            PositionExpectation: Value, cross-check and aliasing flag
        """
        position, boundary = self._position_from_states(field.values[None], field.grid, k)
        aliasing = bool(boundary[0] > ALIASING_MASS)
        if aliasing:
            logger.warning("Boundary mass %.3e exceeds %.1e", boundary[0], ALIASING_MASS)
        return PositionExpectation(
            value=position[0],
            cross_check=self._position_by_stencil(field.values, field.grid, k)
            if cross_check
            else None,
            boundary_mass=float(boundary[0]),
            aliasing_detected=aliasing,
        )

    def _velocity_stack(
        self, grid: MomentumGrid, kind: HamiltonianKind, axis: int, k: PhysicalConstants
    ) -> np.ndarray:
        return self._hamiltonian.batch_velocity(kind, grid.momenta(), axis, k)

    def observable_series(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        times: Sequence[float],
        k: PhysicalConstants = NATURAL,
        axis: int = 2,
    ) -> ObservableSeries:
        """
        Expectation values along an exact evolution.

        Args:
            field: Initial field
            kind: paper, dirac or pauli
            times: Strictly increasing sample times
            k: Physical constants
            axis: Cartesian axis of the position and velocity columns

        Returns:
            ObservableSeries: q, v, p along the axis, norm, energy, Gamma and beta
        """
        grid = field.grid
        times = np.asarray(times, dtype=float)
        name = AXIS_NAMES[axis]
        momenta = grid.momenta()
        operators = {
            f"v_{name}": self._velocity_stack(grid, kind, axis, k),
            "energy": self._hamiltonian.batch_hamiltonian(kind, momenta, k),
            "Gamma": self._hamiltonian.gamma_factor(),
            "beta": np.diag([1.0, 1.0, -1.0, -1.0]).astype(np.complex128),
        }
        columns: Dict[str, List[np.ndarray]] = {
            f"q_{name}": [],
            f"p_{name}": [],
            "norm": [],
            **{key: [] for key in operators},
        }
        momentum_axis = momenta[..., axis]
        worst_boundary = 0.0
        for _, states in self._states(field, kind, times, k):
            position, boundary = self._position_from_states(states, grid, k)
            worst_boundary = max(worst_boundary, float(np.max(boundary)))
            density = np.sum(np.abs(states) ** 2, axis=-1)
            spatial = tuple(range(1, grid.dim + 1))
            columns[f"q_{name}"].append(position[:, axis])
            columns["norm"].append(np.sum(density, axis=spatial) * grid.cell)
            columns[f"p_{name}"].append(
                np.sum(density * momentum_axis, axis=spatial) * grid.cell
            )
            for key, op in operators.items():
                columns[key].append(np.real(self._expect(states, op, grid.cell, grid.dim)))

        aliasing = worst_boundary > ALIASING_MASS
        if aliasing:
            logger.warning(
                "Aliasing in the %s series: boundary mass %.3e", kind.value, worst_boundary
            )
        return ObservableSeries(
            times=times,
            columns={key: np.concatenate(parts) for key, parts in columns.items()},
            model=kind,
            aliasing_detected=aliasing,
        )

    def closed_form_series(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        times: Sequence[float],
        k: PhysicalConstants = NATURAL,
        axis: int = 2,
    ) -> ObservableSeries:
        """
        <q>(t) = <q>(0) + <D(p, t)> from the closed-form displacement, mode by mode.

        For the `paper` and `dirac` models (H^2 = E^2)
        D = E H^-1 g t - (i hbar / 2) H^-1 (exp(2iHt/hbar) - 1) eta(0), with g = dE/dp;
        for pauli D = p t / m0.

        Args:
            field: Initial field
            kind: paper, dirac or pauli
            times: Sample times
            k: Physical constants
            axis: Cartesian axis

        Returns:
            ObservableSeries: Single column q_<axis>
        """
        grid = field.grid
        times = np.asarray(times, dtype=float)
        momenta = grid.momenta().reshape(-1, 3)
        start = self.expect_position(field, k, cross_check=False).value[axis]
        flat = field.values.reshape(-1, 4)
        density = np.sum(np.abs(flat) ** 2, axis=-1)

        if kind == HamiltonianKind.PAULI:
            drift = np.sum(density * momenta[:, axis]) * grid.cell / k.m0
            values = start + drift * times
        else:
            modes = self.mode_spectrum(grid, kind, k)
            energies, vectors = modes
            amplitudes = self._eigen_amplitudes(field, modes)
            eta = self._hamiltonian.batch_eta(kind, momenta, axis, k)
            eta_eigen = np.einsum("mji,mjk,mkl->mil", vectors.conj(), eta, vectors)
            weights = np.conj(amplitudes) / energies * np.einsum(
                "mab,mb->ma", eta_eigen, amplitudes
            )
            e = self._hamiltonian.dispersion(kind, np.linalg.norm(momenta, axis=-1), k)
            g = self._hamiltonian.group_velocity(kind, momenta, k)[:, axis]
            drift_density = np.abs(amplitudes) ** 2 * (e * g)[:, None] / energies
            drift = np.sum(drift_density) * grid.cell

            values = np.empty_like(times)
            size = _chunk_size(energies.shape[0])
            for s in range(0, len(times), size):
                chunk = times[s:s + size]
                phase = np.exp(2j * energies[None] * chunk[:, None, None] / k.hbar) - 1.0
                oscillation = np.sum(weights[None] * phase, axis=(1, 2)) * grid.cell
                values[s:s + size] = start + drift * chunk + np.real(
                    -0.5j * k.hbar * oscillation
                )
        return ObservableSeries(times=times, columns={f"q_{AXIS_NAMES[axis]}": values}, model=kind)

    def ehrenfest_check(
        self,
        field: SpinorField,
        kind: HamiltonianKind,
        times: Sequence[float],
        k: PhysicalConstants = NATURAL,
        step: float = FD_TIME_STEP,
        axis: int = 2,
        points: int = EHRENFEST_POINTS,
    ) -> float:
        """
        Largest deviation of d<q>/dt (fourth-order stencil) from <v> at evenly spread times.

        Args:
            field: Initial field
            kind: paper, dirac or pauli
            times: Time range the check times are spread across
            k: Physical constants
            step: Stencil step
            axis: Cartesian axis
            points: Number of check times

        Returns:
            float: max |d<q>/dt - <v>|
        """
        times = np.asarray(times, dtype=float)
        centres = np.linspace(times[0], times[-1], points)
        offsets = np.array(STENCIL_OFFSETS, dtype=float) * step
        sample_times = (centres[:, None] + offsets[None]).ravel()
        velocity_op = self._velocity_stack(field.grid, kind, axis, k)

        positions: List[np.ndarray] = []
        velocities: List[np.ndarray] = []
        for _, states in self._states(field, kind, sample_times, k):
            positions.append(self._position_from_states(states, field.grid, k)[0][:, axis])
        for _, states in self._states(field, kind, centres, k):
            velocities.append(
                np.real(self._expect(states, velocity_op, field.grid.cell, field.grid.dim))
            )
        q = np.concatenate(positions).reshape(points, len(STENCIL_OFFSETS))
        derivative = q @ np.array(STENCIL_WEIGHTS) / (12.0 * step)
        return float(np.max(np.abs(derivative - np.concatenate(velocities))))

    # ------------------------------------------------------------------
    # Zitterbewegung analysis
    # ------------------------------------------------------------------

    def zbw_analysis(self, series: ObservableSeries, column: Optional[str] = None) -> ZbwReport:
        """
        Drift, angular frequency and amplitude of a position series.

        The series is detrended by linear least squares; the peak of the
        Hann-windowed, zero-padded spectrum of the residual gives the frequency
        (parabolic interpolation on the log magnitude), and a joint fit of
        a + b t + A cos(wt) + B sin(wt) gives the drift and the amplitude.

        Args:
            series: Uniformly sampled series
            column: Column to analyse (defaults to the first q_* column)

        Returns:
            ZbwReport: frequency and amplitude are 0 when no peak clears the noise floor

        Raises:
            ConfigError: Too few samples, non-uniform times, or fewer than 10 periods
        """
        times = series.times
        if column is None:
            column = next(name for name in series.columns if name.startswith("q_"))
        values = np.asarray(series[column], dtype=float)
        n = times.size
        if n < MIN_ZBW_SAMPLES:
            raise ConfigError(ErrorMessages.TOO_FEW_SAMPLES.format(needed=MIN_ZBW_SAMPLES, got=n))
        steps = np.diff(times)
        dt = float(np.mean(steps))
        if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, abs(times[-1])):
            raise ConfigError(ErrorMessages.TIMES_NOT_UNIFORM)
        span = float(times[-1] - times[0])

        linear = np.column_stack([np.ones(n), times])
        coefficients, *_ = scipy.linalg.lstsq(linear, values)
        residual = values - linear @ coefficients

        padded = ZBW_ZERO_PADDING * n
        magnitude = np.abs(scipy.fft.rfft(residual * signal.get_window("hann", n), n=padded))
        omega = 2.0 * np.pi * scipy.fft.rfftfreq(padded, d=dt)
        usable = np.flatnonzero(omega > 2.0 * 2.0 * np.pi / span)
        usable = usable[(usable > 0) & (usable < magnitude.size - 1)]

        flat = ZbwReport(
            drift_velocity=float(coefficients[1]),
            oscillation_frequency=0.0,
            oscillation_amplitude=0.0,
            residual_power=float(np.mean(residual**2)),
            peak_prominence=0.0,
        )
        if usable.size == 0 or np.max(magnitude[usable]) == 0.0:
            return flat

        peak = int(usable[np.argmax(magnitude[usable])])
        prominence = float(magnitude[peak] / max(np.median(magnitude[usable]), 1e-300))
        left, centre, right = np.log(np.maximum(magnitude[peak - 1:peak + 2], 1e-300))
        curvature = left - 2.0 * centre + right
        shift = 0.5 * (left - right) / curvature if curvature != 0 else 0.0
        frequency = float(omega[peak] + shift * (omega[1] - omega[0]))

        joint = np.column_stack(
            [np.ones(n), times, np.cos(frequency * times), np.sin(frequency * times)]
        )
        fit, *_ = scipy.linalg.lstsq(joint, values)
        amplitude = float(np.hypot(fit[2], fit[3]))
        if amplitude < ZBW_AMPLITUDE_FLOOR or prominence < ZBW_PEAK_PROMINENCE:
            return flat.model_copy(update={"peak_prominence": prominence})

        periods = frequency * span / (2.0 * np.pi)
        if periods < MIN_ZBW_PERIODS:
            raise ConfigError(
                ErrorMessages.TOO_FEW_PERIODS.format(periods=periods, needed=MIN_ZBW_PERIODS)
            )
        return ZbwReport(
            drift_velocity=float(fit[1]),
            oscillation_frequency=frequency,
            oscillation_amplitude=amplitude,
            residual_power=float(np.mean((values - joint @ fit) ** 2)),
            peak_prominence=prominence,
        )

    def compare_models(
        self,
        field: SpinorField,
        times: Sequence[float],
        k: PhysicalConstants = NATURAL,
        kinds: Sequence[HamiltonianKind] = tuple(HamiltonianKind),
        axis: int = 2,
    ) -> Dict[HamiltonianKind, ObservableSeries]:
        """
        The same packet evolved by each model on the same time grid.

        Returns:
            Dict[HamiltonianKind, ObservableSeries]: Aligned series per model
        """
        return {kind: self.observable_series(field, kind, times, k, axis) for kind in kinds}
