"""
Command-line front end of the nonrelativistic spin-1/2 laboratory.

    nrspin algebra|spectrum|zbw|lie|compare|report [--config FILE] [--key value ...]

Every RunConfig key is accepted as ``--key-with-dashes value``; boolean keys are
plain switches. Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
configuration error, 3 I/O error.
"""
import argparse
import sys
from types import ModuleType
from typing import Dict, List, Optional, Tuple

from app.commands import algebra, compare, lie, report, spectrum, zbw
from app.config import load_run_config, settings
from app.constants import REPORT_FILE, Command, ExitCode, SuccessMessages
from app.core.exceptions import LabError, OutputError
from app.core.logging import configure_logging, get_logger
from app.dependencies import get_report_service
from app.models.config import RunConfig
from app.models.report import ReportDocument

logger = get_logger(__name__)

COMMANDS: Dict[Command, ModuleType] = {
    Command.ALGEBRA: algebra,
    Command.SPECTRUM: spectrum,
    Command.ZBW: zbw,
    Command.LIE: lie,
    Command.COMPARE: compare,
    Command.REPORT: report,
}


def build_parser() -> argparse.ArgumentParser:
    """Parser with one flag per RunConfig key."""
    parser = argparse.ArgumentParser(
        prog="nrspin",
        description="Verify the nonrelativistic spin-1/2 Hamiltonian and simulate its dynamics.",
    )
    parser.add_argument("command", choices=[c.value for c in Command], help="Sub-command")
    parser.add_argument("--config", default=None, help="Config file with 'key = value' lines")
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
    for name, field in RunConfig.model_fields.items():
        flag = "--" + name.replace("_", "-")
        if field.annotation is bool:
            parser.add_argument(
                flag, dest=name, action="store_const", const="true", help=field.description
            )
        else:
            parser.add_argument(flag, dest=name, metavar="VALUE", help=field.description)
    return parser


def execute(command: Command, config: RunConfig) -> Tuple[ReportDocument, str]:
    """
    Run one sub-command and write its report.

    Args:
        command: Sub-command to run
        config: Validated configuration

    Returns:
        The report document and the path it was written to
    """
    reports = get_report_service()
    doc = COMMANDS[command].run(config)
    path = reports.output_path(config.output_dir, REPORT_FILE.format(command=command.value))
    doc = doc.model_copy(update={"outputs": doc.outputs + [str(path)]})
    reports.write_report(doc, path)
    return doc, str(path)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the command and map the outcome to an exit code.

    Args:
        argv: Arguments without the program name (defaults to sys.argv)

    Returns:
        int: Process exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging(args.log_level or settings.log_level)
    overrides = {name: getattr(args, name) for name in RunConfig.model_fields}
    try:
        config = load_run_config(args.config, overrides)
        doc, path = execute(Command(args.command), config)
    except OutputError as e:
        logger.error("%s", e)
        return e.exit_code
    except OSError as e:
        logger.error("%s", e)
        return ExitCode.IO
    except LabError as e:
        logger.error("%s", e)
        return e.exit_code

    print(SuccessMessages.REPORT_WRITTEN.format(path=path))
    if not doc.passed:
        failed = doc.failed_checks
        logger.warning(
            SuccessMessages.CHECKS_FAILED.format(
                failed=len(failed), count=len(doc.checks), names=", ".join(c.name for c in failed)
            )
        )
        return ExitCode.CHECK_FAILED
    logger.info(SuccessMessages.ALL_CHECKS_PASSED.format(count=len(doc.checks)))
    return ExitCode.OK


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
