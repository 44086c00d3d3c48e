#!/usr/bin/env python3
"""
Smoke test for the nrspin laboratory.
Runs every sub-command on a small grid and prints the headline numbers of each report.
"""
import sys
import tempfile
from pathlib import Path

from app.dependencies import get_report_service
from app.main import main

# Small 1D grid: fast, still ten oscillation periods
SMALL_RUN = [
    "--n-points", "512",
    "--p-max", "2",
    "--t-max", "40",
    "--samples", "512",
    "--p-batch", "20",
    "--log-level", "WARNING",
]

COMMANDS = ["algebra", "spectrum", "lie", "zbw", "compare"]


def run_command(command: str, output_dir: Path) -> bool:
    """Run one sub-command and print its report summary."""
    print(f"🧪 Running {command}...")
    code = main([command, "--output-dir", str(output_dir), "--model", "all", *SMALL_RUN])
    report = output_dir / f"{command}_report.txt"
    if not report.is_file():
        print(f"❌ No report written (exit code {code})")
        print()
        return False

    doc = get_report_service().read_report(report)
    print(f"Exit code: {code}")
    print(f"Checks: {len(doc.checks)}, failed: {len(doc.failed_checks)}")
    for check in doc.failed_checks:
        print(f"   ❌ {check.name}: residual {check.residual:.3e} > {check.tolerance:.3e}")
    for key in ("killing_signature", "identified", "paper.oscillation_frequency",
                "paper.oscillation_amplitude", "paper.drift_velocity"):
        if key in doc.values:
            print(f"   {key}: {doc.values[key]}")
    print("✅ Passed" if code == 0 else "⚠️  Finished with failed checks")
    print()
    return code == 0


def test_usage_errors(output_dir: Path) -> bool:
    """Exit codes for bad input."""
    print("🚫 Testing usage errors...")
    cases = {
        "unknown command": (["teleport"], 2),
        "empty momentum batch": (["algebra", "--p-batch", "0"], 2),
        "too few periods": (["zbw", "--t-max", "5"], 2),
    }
    ok = True
    for name, (argv, expected) in cases.items():
        code = main([*argv, "--output-dir", str(output_dir), "--log-level", "CRITICAL"])
        status = "✅" if code == expected else "❌"
        print(f"   {status} {name}: exit {code} (expected {expected})")
        ok = ok and code == expected
    print()
    return ok


def main_smoke() -> int:
    """Run the whole smoke test."""
    print("🚀 Starting nrspin smoke test")
    print("=" * 50)
    with tempfile.TemporaryDirectory() as tmp:
        output_dir = Path(tmp)
        results = {command: run_command(command, output_dir) for command in COMMANDS}
        results["usage errors"] = test_usage_errors(output_dir)

    print("=" * 50)
    for name, passed in results.items():
        print(f"{'✅' if passed else '❌'} {name}")
    if all(results.values()):
        print("🎉 Smoke test completed!")
        return 0
    print("💥 Smoke test found problems")
    return 1


if __name__ == "__main__":
    sys.exit(main_smoke())
