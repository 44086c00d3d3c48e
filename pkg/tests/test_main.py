"""
Tests for the command-line front end: sub-commands, result files and exit codes.
"""
from pathlib import Path

import pytest

from app.commands import compare
from app.constants import ENV_CONFIG_FILE, ENV_OUTPUT_DIR, Adjudications, CheckStatus, ExitCode
from app.dependencies import get_report_service
from app.main import build_parser, main

SMALL_ZBW = ["--n-points", "512", "--p-max", "2", "--t-max", "40", "--samples", "512"]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv(ENV_OUTPUT_DIR, raising=False)
    monkeypatch.delenv(ENV_CONFIG_FILE, raising=False)


@pytest.fixture
def out(tmp_path) -> Path:
    return tmp_path / "results"


def _run(command: str, out: Path, *flags: str) -> int:
    return main([command, "--output-dir", str(out), *flags])


def test_every_config_key_has_a_flag():
    parser = build_parser()
    args = parser.parse_args(["lie", "--p-batch", "7", "--paper-literal-spin"])

    assert args.p_batch == "7"
    assert args.paper_literal_spin == "true"
    assert args.drop_generator is None


def test_lie_passes_and_writes_report(out, capsys):
    assert _run("lie", out) == ExitCode.OK

    report = out / "lie_report.txt"
    assert report.is_file()
    assert str(report) in capsys.readouterr().out
    doc = get_report_service().read_report(report)
    assert doc.command == "lie"
    assert doc.values["killing_signature"] == "8,7,0"
    assert doc.values["oracle_signature"] == "8,7,0"


def test_lie_report_is_byte_identical_across_runs(out):
    _run("lie", out)
    first = (out / "lie_report.txt").read_bytes()
    _run("lie", out)

    assert (out / "lie_report.txt").read_bytes() == first


def test_dropping_a_generator_fails(out):
    assert _run("lie", out, "--drop-generator", "i_gamma5") == ExitCode.CHECK_FAILED


def test_unknown_generator_is_a_usage_error(out):
    assert _run("lie", out, "--drop-generator", "gamma7") == ExitCode.USAGE


def test_literal_spin_is_reported_not_failed(out):
    assert _run("lie", out, "--paper-literal-spin") == ExitCode.OK

    text = (out / "lie_report.txt").read_text(encoding="utf-8")
    assert Adjudications.OQ3 in text
    doc = get_report_service().parse_report(text)
    spin = next(c for c in doc.checks if c.name == "spin_hermitian")
    assert spin.status == CheckStatus.REPORTED
    assert spin.residual > 0.1


def test_algebra_passes(out):
    assert _run("algebra", out, "--p-batch", "10") == ExitCode.OK

    doc = get_report_service().read_report(out / "algebra_report.txt")
    printed = next(c for c in doc.checks if c.name == "anticommutator_printed_energy")
    assert printed.status == CheckStatus.REPORTED
    assert printed.residual == pytest.approx(0.17157, abs=1e-5)


def test_impossible_tolerance_fails_algebra(out):
    assert _run("algebra", out, "--p-batch", "10", "--tol-all", "1e-20") == ExitCode.CHECK_FAILED


def test_empty_momentum_batch_is_a_usage_error(out):
    assert _run("algebra", out, "--p-batch", "0") == ExitCode.USAGE
    assert not (out / "algebra_report.txt").exists()


def test_unknown_command():
    assert main(["teleport"]) == ExitCode.USAGE


def test_missing_config_file(out, tmp_path):
    assert _run("lie", out, "--config", str(tmp_path / "absent.cfg")) == ExitCode.USAGE


def test_spectrum_table(out):
    assert _run("spectrum", out, "--p-max", "2", "--spectrum-points", "5") == ExitCode.OK

    lines = (out / "spectrum.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "p,paper,dirac,pauli"
    assert lines[1] == "0.0,1.0,1.0,0.0"
    assert [float(x) for x in lines[-1].split(",")] == [2.0, 3.0, 5.0**0.5, 2.0]
    assert len(lines) == 6


def test_zbw_small_grid(out):
    assert _run("zbw", out, *SMALL_ZBW) == ExitCode.OK

    series = get_report_service().read_series(out / "zbw_paper.csv")
    doc = get_report_service().read_report(out / "zbw_report.txt")
    assert series.times.size == 512
    assert doc.values["paper.oscillation_frequency"] == pytest.approx(2.0, rel=0.02)
    cross_check = next(c for c in doc.checks if c.name == "paper.position_cross_check")
    assert cross_check.status == CheckStatus.PASS
    assert doc.values["paper.position_cross_check_t"] > 0


def test_too_few_periods_is_a_usage_error(out):
    assert _run("zbw", out, "--t-max", "20") == ExitCode.USAGE


def test_output_directory_is_a_file(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("", encoding="utf-8")

    assert _run("lie", blocker) == ExitCode.IO


def test_environment_output_directory(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_OUTPUT_DIR, str(tmp_path / "env"))

    assert main(["lie"]) == ExitCode.OK
    assert (tmp_path / "env" / "lie_report.txt").is_file()


def test_zbw_pauli_baseline(out):
    assert _run("zbw", out, *SMALL_ZBW, "--model", "pauli") == ExitCode.OK

    doc = get_report_service().read_report(out / "zbw_report.txt")
    assert doc.values["pauli.oscillation_amplitude"] < 1e-10
    assert (out / "zbw_pauli.csv").is_file()


def test_full_report_is_complete_and_reproducible(out):
    flags = [*SMALL_ZBW, "--p-batch", "10"]
    assert _run("report", out, *flags) == ExitCode.OK
    first = (out / "report_report.txt").read_bytes()
    assert _run("report", out, *flags) == ExitCode.OK

    assert (out / "report_report.txt").read_bytes() == first
    doc = get_report_service().read_report(out / "report_report.txt")
    names = [c.name for c in doc.checks]
    assert len(names) == len(set(names))
    assert {"hamiltonian_square", "lie_identified", "determinism", "paper.ehrenfest"} <= set(names)
    assert Adjudications.OQ2 in doc.notes
    determinism = next(c for c in doc.checks if c.name == "determinism")
    assert determinism.status == CheckStatus.PASS
    assert "in-process" in determinism.detail


def test_compare_runs_every_model(small_config):
    doc = compare.run(small_config)
    names = {c.name for c in doc.checks}

    assert doc.passed, [c.name for c in doc.failed_checks]
    assert {"paper.frequency", "dirac.frequency", "pauli.amplitude_bound"} <= names
    assert {"paper.drift_matches_closed_form", "paper_vs_dirac_drift"} <= names
    assert [Path(p).name for p in doc.outputs] == [
        "compare_paper.csv",
        "compare_dirac.csv",
        "compare_pauli.csv",
    ]
