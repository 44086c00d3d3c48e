"""
Configuration settings for the nonrelativistic spin-1/2 laboratory.
"""
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import load_dotenv
from pydantic import ValidationError

from app.constants import (
    DEFAULT_LOG_LEVEL,
    ENV_CONFIG_FILE,
    ENV_LOG_LEVEL,
    ENV_OUTPUT_DIR,
    ErrorMessages,
)
from app.core.exceptions import ConfigError
from app.models.config import RunConfig

# Load environment variables from .env file
load_dotenv()


class Settings:
    """Application settings loaded from environment variables."""

    @property
    def output_dir(self) -> Optional[str]:
        """Output directory override; applied above the config file, below flags."""
        return os.getenv(ENV_OUTPUT_DIR) or None

    @property
    def log_level(self) -> str:
        return os.getenv(ENV_LOG_LEVEL, DEFAULT_LOG_LEVEL)

    @property
    def config_file(self) -> Optional[str]:
        """Config file used when --config is not given."""
        return os.getenv(ENV_CONFIG_FILE) or None


# Global settings instance
settings = Settings()


def parse_config_text(text: str) -> Dict[str, str]:
    """
    Parse flat 'key = value' lines; '#' starts a comment.

    Args:
        text: Config file contents

    Returns:
        Dict[str, str]: Raw values keyed by config key

    Raises:
        ConfigError: On a malformed line or an unknown key
    """
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or not key:
            raise ConfigError(ErrorMessages.BAD_CONFIG_LINE.format(line=number, text=raw))
        if key not in RunConfig.model_fields:
            raise ConfigError(ErrorMessages.UNKNOWN_CONFIG_KEY.format(key=key))
        values[key] = value
    return values


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read and parse a config file.

    Raises:
        ConfigError: If the file does not exist or cannot be parsed
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(ErrorMessages.CONFIG_NOT_FOUND.format(path=path))
    return parse_config_text(path.read_text(encoding="utf-8"))


def _normalize(values: Mapping[str, Any]) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in values.items():
        if value is None:
            continue
        if isinstance(value, str) and value.lower() in ("none", ""):
            out[key] = None
            continue
        out[key] = value
    return out


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    env: Optional[Settings] = None,
) -> RunConfig:
    """
    Merge defaults, config file, environment and command-line overrides.

    Precedence: defaults < file < NRSPIN_OUTPUT_DIR < overrides.

    Args:
        path: Config file, or None for the NRSPIN_CONFIG default (if any)
        overrides: Values from command-line flags (None entries are ignored)
        env: Settings to read the environment from

    Returns:
        RunConfig: Validated configuration

    Raises:
        ConfigError: If any value is invalid or a precondition fails
    """
    env = env or settings
    merged: Dict[str, Any] = {}
    source = path or env.config_file
    if source:
        merged.update(read_config_file(source))
    if env.output_dir:
        merged["output_dir"] = env.output_dir
    merged.update(_normalize(overrides or {}))
    merged = {k: v for k, v in merged.items() if v is not None}
    try:
        return RunConfig(**merged)
    except ValidationError as e:
        detail = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'config'}: {err['msg']}"
            for err in e.errors()
        )
        raise ConfigError(ErrorMessages.INVALID_CONFIG.format(detail=detail)) from e
