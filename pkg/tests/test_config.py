"""
Tests for config-file parsing, value precedence and the run preconditions.
"""
from typing import Optional

import pytest

from app.config import Settings, load_run_config, parse_config_text, read_config_file
from app.constants import (
    DEFAULT_OUTPUT_DIR,
    DEFAULT_P_MAX_3D,
    DEFAULT_POINTS_3D,
    DEFAULT_SAMPLES_3D,
    DEFAULT_T_MAX_3D,
    ENV_OUTPUT_DIR,
    TOL_CLOSURE,
    ModelSelection,
    UnitSystem,
)
from app.core.exceptions import ConfigError


class FakeSettings(Settings):
    """Environment stand-in with fixed values."""

    def __init__(self, output_dir: Optional[str] = None, config_file: Optional[str] = None):
        self._output_dir = output_dir
        self._config_file = config_file

    @property
    def output_dir(self) -> Optional[str]:
        return self._output_dir

    @property
    def config_file(self) -> Optional[str]:
        return self._config_file


@pytest.fixture
def env() -> FakeSettings:
    return FakeSettings()


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# small run\n"
        "model = all\n"
        "n-points = 512   # per axis\n"
        "p_max = 2.0\n"
        "\n"
        "output_dir = from-file\n",
        encoding="utf-8",
    )
    return path


def test_parse_config_text_skips_comments_and_normalizes_dashes():
    values = parse_config_text("# header\np-batch = 12\n  seed=3  # inline\n\n")

    assert values == {"p_batch": "12", "seed": "3"}


def test_unknown_key():
    with pytest.raises(ConfigError, match="frobnicate"):
        parse_config_text("frobnicate = 1\n")


def test_line_without_equals_sign():
    with pytest.raises(ConfigError):
        parse_config_text("seed 3\n")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "absent.cfg")


def test_defaults(env):
    config = load_run_config(env=env)

    assert config.units == UnitSystem.NATURAL
    assert config.model == ModelSelection.PAPER
    assert config.output_dir == DEFAULT_OUTPUT_DIR
    assert config.tolerance("tol_closure") == TOL_CLOSURE
    assert config.constants().rest_energy == 1.0


def test_file_values(config_file, env):
    config = load_run_config(config_file, env=env)

    assert config.model == ModelSelection.ALL
    assert config.n_points == 512
    assert config.p_max == 2.0
    assert config.output_dir == "from-file"


def test_precedence_file_then_environment_then_flags(config_file):
    env = FakeSettings(output_dir="from-env")

    assert load_run_config(config_file, env=env).output_dir == "from-env"
    assert (
        load_run_config(config_file, {"output_dir": "from-flag"}, env=env).output_dir
        == "from-flag"
    )


def test_unset_flags_do_not_override(config_file, env):
    config = load_run_config(config_file, {"model": None, "seed": None}, env=env)

    assert config.model == ModelSelection.ALL


def test_config_file_from_environment(config_file):
    config = load_run_config(env=FakeSettings(config_file=str(config_file)))

    assert config.n_points == 512


def test_real_settings_read_environment(monkeypatch):
    monkeypatch.setenv(ENV_OUTPUT_DIR, "env-dir")

    assert Settings().output_dir == "env-dir"


@pytest.mark.parametrize(
    "overrides",
    [
        {"p_batch": "0"},
        {"p_max": "0.1"},
        {"n_points": "500"},
        {"n_points": "16"},
        {"samples": "100"},
        {"t_max": "5"},
        {"m0": "2"},
        {"spinor_weight": "0,0,0,0"},
        {"dim": "1", "p0": "0.1,0,0"},
        {"model": "klein-gordon"},
        {"tol_all": "-1"},
    ],
)
def test_invalid_values(env, overrides):
    with pytest.raises(ConfigError):
        load_run_config(overrides=overrides, env=env)


def test_custom_units(env):
    config = load_run_config(overrides={"units": "custom", "m0": "2", "c": "3"}, env=env)
    k = config.constants()

    assert k.rest_energy == 18.0
    assert config.units_label() == "custom (m0=2.0, c=3.0, hbar=1.0)"


def test_tol_all_overrides_every_tolerance(env):
    config = load_run_config(overrides={"tol_all": "1e-3"}, env=env)

    assert config.tolerance("tol_exact") == 1e-3
    assert config.tolerance("tol_killing_zero") == 1e-3


def test_scalar_p0_points_along_z(env):
    assert load_run_config(overrides={"p0": "0.5"}, env=env).p0 == (0.0, 0.0, 0.5)


def test_spinor_weight_from_text(env):
    config = load_run_config(overrides={"spinor_weight": "1, 0, 1j, 0"}, env=env)

    assert config.spinor_weight == (1 + 0j, 0j, 1j, 0j)


def test_three_dimensional_default_grid(env):
    config = load_run_config(overrides={"dim": "3"}, env=env)

    assert config.n_points == DEFAULT_POINTS_3D
    assert config.grid().shape == (DEFAULT_POINTS_3D,) * 3
    assert (config.p_max, config.t_max, config.samples) == (
        DEFAULT_P_MAX_3D,
        DEFAULT_T_MAX_3D,
        DEFAULT_SAMPLES_3D,
    )


def test_three_dimensional_grid_keeps_explicit_values(env):
    config = load_run_config(overrides={"dim": "3", "p_max": "0.7", "samples": "300"}, env=env)

    assert config.p_max == 0.7
    assert config.samples == 300


def test_under_resolved_packet_is_rejected(env):
    with pytest.raises(ConfigError) as exc:
        load_run_config(overrides={"dim": "3", "p_max": "8"}, env=env)
    assert "grid too coarse" in str(exc.value)


def test_none_clears_a_file_value(tmp_path, env):
    path = tmp_path / "drop.cfg"
    path.write_text("drop_generator = i_gamma5\n", encoding="utf-8")

    assert load_run_config(path, env=env).drop_generator == "i_gamma5"
    assert load_run_config(path, {"drop_generator": "none"}, env=env).drop_generator is None


def test_times_and_rng_are_reproducible(env):
    config = load_run_config(env=env)

    assert config.times().size == config.samples
    assert config.times()[-1] == config.t_max
    assert config.rng().normal() == config.rng().normal()
