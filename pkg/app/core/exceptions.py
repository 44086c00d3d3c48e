"""
Exception hierarchy of the laboratory.

Every error carries the process exit code the command-line front end maps it to.
"""
from app.constants import ExitCode


class LabError(Exception):
    """Base class for all errors raised by the laboratory."""
    exit_code: ExitCode = ExitCode.CHECK_FAILED


class ConfigError(LabError):
    """Invalid configuration file, flag, or parameter combination."""
    exit_code = ExitCode.USAGE


class GridCoverageError(ConfigError, ValueError):
    """The momentum grid does not cover the requested wavepacket."""


class OutputError(LabError):
    """A result file could not be written or read back."""
    exit_code = ExitCode.IO


class ClosureError(LabError):
    """A generator set failed a strict closure check."""

    def __init__(self, message: str, pair: tuple[str, str], residual: float):
        super().__init__(message)
        self.pair = pair
        self.residual = residual
