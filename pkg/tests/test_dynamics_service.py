"""
Tests for wavepacket construction, exact evolution, expectation values and the
Zitterbewegung extraction.
"""
import math

import numpy as np
import pytest

from app.constants import MODE_CACHE_SIZE, HamiltonianKind
from app.core.exceptions import ConfigError, GridCoverageError
from app.models.config import RunConfig
from app.models.dynamics import MomentumGrid, ObservableSeries

MIXED = (1 / math.sqrt(2), 0, 1 / math.sqrt(2), 0)
UPPER = (1, 0, 0, 0)
GRID_1D = MomentumGrid(dim=1, n_points=512, p_max=2.0)
TIMES = np.linspace(0.0, 40.0, 512)


@pytest.fixture
def packet(dynamics):
    return dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.05, MIXED)


@pytest.fixture
def paper_series(dynamics, packet):
    return dynamics.observable_series(packet, HamiltonianKind.PAPER, TIMES)


def _drift(column: np.ndarray) -> float:
    return float(np.max(np.abs(column - column[0])))


def _synthetic(times: np.ndarray, values: np.ndarray) -> ObservableSeries:
    return ObservableSeries(times=times, columns={"q_z": values})


def _second_moment(field) -> float:
    """<|p|^2> of a normalized field."""
    squared = np.sum(field.grid.momenta() ** 2, axis=-1)
    return float(np.sum(field.density() * squared) * field.grid.cell)


class TestGaussianPacket:
    """Packet construction and its preconditions."""

    def test_unit_norm(self, packet):
        assert packet.norm() == pytest.approx(1.0, abs=1e-12)
        assert packet.values.shape == (512, 4)

    def test_weight_is_normalized_internally(self, dynamics):
        scaled = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.05, (3, 0, 3, 0))
        reference = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.05, MIXED)

        np.testing.assert_allclose(scaled.values, reference.values, atol=1e-15)

    def test_mean_momentum(self, dynamics):
        field = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.5), 0.05, MIXED)

        np.testing.assert_allclose(dynamics.momentum_expectation(field), [0, 0, 0.5], atol=1e-10)

    def test_grid_too_small(self, dynamics):
        grid = MomentumGrid(dim=1, n_points=512, p_max=0.2)

        with pytest.raises(GridCoverageError) as exc:
            dynamics.gaussian_packet(grid, (0.0, 0.0, 0.0), 0.05, MIXED)
        assert isinstance(exc.value, ValueError)
        assert "grid too small" in str(exc.value)

    def test_grid_too_coarse(self, dynamics):
        grid = MomentumGrid(dim=1, n_points=16, p_max=2.0)

        with pytest.raises(GridCoverageError) as exc:
            dynamics.gaussian_packet(grid, (0.0, 0.0, 0.0), 0.25, MIXED)
        assert "grid too coarse" in str(exc.value)

    def test_second_moment_1d(self, packet):
        assert _second_moment(packet) == pytest.approx(0.05**2, rel=0.01)

    def test_default_3d_grid_resolves_the_packet(self, dynamics):
        config = RunConfig(dim=3)
        field = dynamics.gaussian_packet(
            config.grid(), config.p0, config.sigma_p, config.spinor_weight
        )

        assert field.values.shape == (64, 64, 64, 4)
        assert _second_moment(field) == pytest.approx(3 * config.sigma_p**2, rel=0.01)

    def test_zero_weight(self, dynamics):
        with pytest.raises(ConfigError):
            dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.05, (0, 0, 0, 0))

    def test_nonpositive_width(self, dynamics):
        with pytest.raises(ConfigError):
            dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.0, MIXED)

    def test_transverse_momentum_on_1d_grid(self, dynamics):
        with pytest.raises(ConfigError):
            dynamics.gaussian_packet(GRID_1D, (0.1, 0.0, 0.0), 0.05, MIXED)

    def test_grid_rejects_non_power_of_two(self):
        with pytest.raises(ValueError):
            MomentumGrid(dim=1, n_points=500, p_max=2.0)


class TestEvolution:
    """Exact per-mode evolution."""

    def test_zero_time_returns_input(self, dynamics, packet):
        assert dynamics.evolve(packet, HamiltonianKind.PAPER, 0.0) is packet

    @pytest.mark.parametrize("kind", list(HamiltonianKind))
    def test_norm_is_conserved(self, dynamics, packet, kind):
        evolved = dynamics.evolve(packet, kind, 37.5)

        assert evolved.norm() == pytest.approx(1.0, abs=1e-12)

    def test_series_matches_single_evolutions(self, dynamics, packet):
        times = [0.5, 3.0, 11.25]
        series = dynamics.evolve_series(packet, HamiltonianKind.DIRAC, times)

        assert len(series) == 3
        for t, field in zip(times, series):
            single = dynamics.evolve(packet, HamiltonianKind.DIRAC, t)
            np.testing.assert_allclose(field.values, single.values, atol=1e-13)

    def test_pauli_evolution_is_a_phase(self, dynamics, packet):
        evolved = dynamics.evolve(packet, HamiltonianKind.PAULI, 2.0)
        p = GRID_1D.axis()
        expected = packet.values * np.exp(-1j * p**2 / 2.0 * 2.0)[:, None]

        np.testing.assert_allclose(evolved.values, expected, atol=1e-13)

    def test_non_finite_time(self, dynamics, packet):
        with pytest.raises(ValueError):
            dynamics.evolve(packet, HamiltonianKind.PAPER, float("nan"))

    def test_mode_spectrum_is_cached(self, dynamics):
        first = dynamics.mode_spectrum(GRID_1D, HamiltonianKind.PAPER)

        assert dynamics.mode_spectrum(GRID_1D, HamiltonianKind.PAPER) is first

    def test_mode_cache_evicts_least_recently_used(self, dynamics):
        grids = [MomentumGrid(dim=1, n_points=64, p_max=1.0 + i) for i in range(MODE_CACHE_SIZE)]
        first = dynamics.mode_spectrum(grids[0], HamiltonianKind.PAPER)
        second = dynamics.mode_spectrum(grids[1], HamiltonianKind.PAPER)
        for grid in grids[2:]:
            dynamics.mode_spectrum(grid, HamiltonianKind.PAPER)
        dynamics.mode_spectrum(grids[0], HamiltonianKind.PAPER)
        dynamics.mode_spectrum(GRID_1D, HamiltonianKind.PAPER)

        assert dynamics.mode_spectrum(grids[0], HamiltonianKind.PAPER) is first
        assert dynamics.mode_spectrum(grids[1], HamiltonianKind.PAPER) is not second


class TestExpectations:
    """Position, momentum and conservation along the series."""

    def test_position_of_symmetric_packet(self, dynamics, packet):
        position = dynamics.expect_position(packet)

        np.testing.assert_allclose(position.value, 0.0, atol=1e-10)
        assert position.cross_check_residual < 1e-6
        assert not position.aliasing_detected

    def test_expect_operator_of_identity_is_norm(self, dynamics, packet):
        assert dynamics.expect_operator(packet, np.eye(4)) == pytest.approx(1.0, abs=1e-12)

    def test_series_columns(self, paper_series):
        assert set(paper_series.columns) == {
            "q_z", "p_z", "norm", "v_z", "energy", "Gamma", "beta"
        }
        assert paper_series.model == HamiltonianKind.PAPER
        assert not paper_series.aliasing_detected

    def test_conservation(self, paper_series):
        assert _drift(paper_series["norm"]) < 1e-10
        assert _drift(paper_series["energy"]) < 1e-10
        assert _drift(paper_series["p_z"]) < 1e-10

    @pytest.mark.parametrize("kind", list(HamiltonianKind))
    def test_ehrenfest(self, dynamics, packet, kind):
        assert dynamics.ehrenfest_check(packet, kind, TIMES) < 1e-6

    def test_numerical_position_matches_closed_form(self, dynamics, packet, paper_series):
        closed = dynamics.closed_form_series(packet, HamiltonianKind.PAPER, TIMES)

        assert float(np.max(np.abs(paper_series["q_z"] - closed["q_z"]))) < 1e-7

    def test_compare_models_shares_time_grid(self, dynamics, packet):
        times = np.linspace(0.0, 5.0, 16)
        series = dynamics.compare_models(packet, times)

        assert set(series) == set(HamiltonianKind)
        for s in series.values():
            np.testing.assert_array_equal(s.times, times)

    def test_three_dimensional_packet(self, dynamics):
        grid = MomentumGrid(dim=3, n_points=32, p_max=1.6)
        field = dynamics.gaussian_packet(grid, (0.0, 0.0, 0.0), 0.25, MIXED)
        series = dynamics.observable_series(field, HamiltonianKind.PAPER, np.linspace(0, 2, 8))

        assert field.values.shape == (32, 32, 32, 4)
        assert field.norm() == pytest.approx(1.0, abs=1e-12)
        assert _drift(series["norm"]) < 1e-10
        assert _drift(series["energy"]) < 1e-10

    @pytest.mark.parametrize("kind", [HamiltonianKind.PAPER, HamiltonianKind.DIRAC])
    def test_position_paths_agree_after_evolution(self, dynamics, kind):
        rng = np.random.default_rng(11)
        weight = rng.normal(size=4) + 1j * rng.normal(size=4)
        field = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.2), 0.05, weight)

        position = dynamics.expect_position(dynamics.evolve(field, kind, 13.7))

        assert position.cross_check_residual < 1e-6
        assert not position.aliasing_detected

    def test_grid_refinement_leaves_position_unchanged(self, dynamics):
        fine = MomentumGrid(dim=1, n_points=1024, p_max=2.0)
        times = np.linspace(0.0, 20.0, 9)
        coarse_field = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.1), 0.05, MIXED)
        fine_field = dynamics.gaussian_packet(fine, (0.0, 0.0, 0.1), 0.05, MIXED)

        coarse = dynamics.observable_series(coarse_field, HamiltonianKind.PAPER, times)
        refined = dynamics.observable_series(fine_field, HamiltonianKind.PAPER, times)

        assert float(np.max(np.abs(coarse["q_z"] - refined["q_z"]))) < 1e-6

    def test_pauli_position_moves_linearly(self, dynamics):
        field = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.3), 0.05, MIXED)
        series = dynamics.observable_series(field, HamiltonianKind.PAULI, TIMES)
        mean_p = dynamics.momentum_expectation(field)[2]

        expected = series["q_z"][0] + mean_p * TIMES
        assert float(np.max(np.abs(series["q_z"] - expected))) < 1e-8

    def test_default_grid_acceptance(self, dynamics):
        config = RunConfig()
        field = dynamics.gaussian_packet(
            config.grid(), config.p0, config.sigma_p, config.spinor_weight
        )
        evolved = dynamics.evolve(field, HamiltonianKind.PAPER, config.t_max)
        position = dynamics.expect_position(evolved)

        assert config.n_points == 4096
        assert _second_moment(field) == pytest.approx(config.sigma_p**2, rel=0.01)
        assert evolved.norm() == pytest.approx(1.0, abs=1e-10)
        assert position.cross_check_residual < 1e-6
        assert not position.aliasing_detected
        assert dynamics.ehrenfest_check(field, HamiltonianKind.PAPER, config.times()) < 1e-6


class TestZitterbewegung:
    """Frequency, amplitude and drift extraction."""

    def test_paper_frequency_and_amplitude(self, dynamics, packet, paper_series):
        analysis = dynamics.zbw_analysis(paper_series)
        closed = dynamics.closed_form_series(packet, HamiltonianKind.PAPER, TIMES)
        oracle = dynamics.zbw_analysis(closed)

        assert analysis.oscillation_frequency == pytest.approx(2.0, rel=0.02)
        assert analysis.oscillation_amplitude == pytest.approx(
            oracle.oscillation_amplitude, rel=0.10
        )
        assert oracle.oscillation_amplitude == pytest.approx(0.5, rel=0.05)
        assert abs(analysis.drift_velocity - oracle.drift_velocity) < 1e-6
        # <p_z^2 / E> for the mixed weight, an eigenvector of alpha_z
        assert oracle.drift_velocity == pytest.approx(0.05**2, rel=0.2)

    def test_dirac_frequency(self, dynamics, packet):
        series = dynamics.observable_series(packet, HamiltonianKind.DIRAC, TIMES)

        assert dynamics.zbw_analysis(series).oscillation_frequency == pytest.approx(2.0, rel=0.02)

    def test_pauli_has_no_oscillation(self, dynamics, packet):
        series = dynamics.observable_series(packet, HamiltonianKind.PAULI, TIMES)

        assert dynamics.zbw_analysis(series).oscillation_amplitude < 1e-10

    def test_single_subspace_is_suppressed(self, dynamics, paper_series):
        upper = dynamics.gaussian_packet(GRID_1D, (0.0, 0.0, 0.0), 0.05, UPPER)
        series = dynamics.observable_series(upper, HamiltonianKind.PAPER, TIMES)
        mixed = dynamics.zbw_analysis(paper_series).oscillation_amplitude

        assert dynamics.zbw_analysis(series).oscillation_amplitude < 0.05 * mixed

    def test_synthetic_signal_is_recovered(self, dynamics):
        times = np.linspace(0.0, 100.0, 1024)
        values = 0.3 + 0.05 * times + 0.2 * np.sin(3.0 * times)

        report = dynamics.zbw_analysis(_synthetic(times, values))

        assert report.oscillation_frequency == pytest.approx(3.0, rel=2e-3)
        assert report.oscillation_amplitude == pytest.approx(0.2, rel=1e-2)
        assert report.drift_velocity == pytest.approx(0.05, abs=1e-3)
        assert report.peak_prominence > 10.0

    def test_straight_line_has_no_peak(self, dynamics):
        times = np.linspace(0.0, 100.0, 512)

        report = dynamics.zbw_analysis(_synthetic(times, 1.0 + 0.25 * times))

        assert report.oscillation_frequency == 0.0
        assert report.oscillation_amplitude == 0.0
        assert report.drift_velocity == pytest.approx(0.25)

    def test_too_few_samples(self, dynamics):
        times = np.linspace(0.0, 100.0, 100)

        with pytest.raises(ConfigError):
            dynamics.zbw_analysis(_synthetic(times, np.sin(3.0 * times)))

    def test_non_uniform_times(self, dynamics):
        times = np.linspace(0.0, 10.0, 300) ** 2

        with pytest.raises(ConfigError):
            dynamics.zbw_analysis(_synthetic(times, np.sin(3.0 * times)))

    def test_too_few_periods(self, dynamics):
        times = np.linspace(0.0, 10.0, 512)

        with pytest.raises(ConfigError):
            dynamics.zbw_analysis(_synthetic(times, np.sin(3.0 * times)))
