"""
Runtime settings.

Values come from (lowest to highest precedence) the defaults below, the
environment (``DIHEDRAL_XI_*`` or a ``.env`` file), a YAML file, and finally
explicit CLI flags.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from .errors import XiError

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("configs/dihedral-xi.yaml")


class XiSettings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="DIHEDRAL_XI_", env_file=".env", extra="ignore"
    )

    p: int = 3
    provider: str = "computed"
    log_level: str = "INFO"
    max_workers: int = 1
    sign_digits: int = 30
    report_indent: int = 2
    mirror_convention: bool = False

    @field_validator("p")
    @classmethod
    def _odd_prime_like(cls, value: int) -> int:
        if value < 3 or value % 2 == 0:
            raise ValueError(f"p must be an odd integer >= 3, got {value}")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in logging.getLevelNamesMapping():
            raise ValueError(f"unknown log level {value!r}")
        return level

    @field_validator("max_workers", "sign_digits")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("must be positive")
        return value

    @classmethod
    def from_yaml(
        cls, path: Optional[Path] = None, **overrides: Any
    ) -> "XiSettings":
        """Load settings from YAML; missing default file means environment only."""
        data: Dict[str, Any] = {}
        config_path = path or DEFAULT_CONFIG_PATH
        if config_path.exists():
            with open(config_path, "r") as f:
                data = yaml.safe_load(f) or {}
            if not isinstance(data, dict):
                raise XiError(f"config file {config_path} must hold a mapping")
            logger.debug(f"Loaded settings from {config_path}")
        elif path is not None:
            raise XiError(f"config file not found: {path}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(**data)
        except ValidationError as e:
            raise XiError(f"invalid configuration: {e}") from e
