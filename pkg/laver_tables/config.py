"""Layered CLI configuration: flags over environment over config.ini over defaults."""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields
from enum import Enum
from pathlib import Path
from typing import Any

from loguru import logger

from laver_tables.constants import (
    CACHE_DIR,
    CONFIG_FILE,
    DEFAULT_SEED,
    ENV_CACHE_DIR,
    ENV_MAX_N,
    ENV_SEED,
    LD_BUDGET,
    MAX_N,
)
from laver_tables.tables.exceptions import ConfigError

CONFIG_SECTION = "laver"


class OutputFormat(Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class CliConfig:
    """Resolved settings shared by every subcommand."""

    max_n: int = MAX_N
    cache_dir: Path | None = CACHE_DIR
    seed: int = DEFAULT_SEED
    format: OutputFormat = OutputFormat.TEXT
    ld_budget: int = LD_BUDGET

    def __post_init__(self) -> None:
        if self.max_n < 0:
            msg = f"max_n must be non-negative, got {self.max_n}"
            raise ConfigError(msg)
        if self.ld_budget < 1:
            msg = f"ld_budget must be positive, got {self.ld_budget}"
            raise ConfigError(msg)

    @property
    def caching(self) -> bool:
        return self.cache_dir is not None

    @classmethod
    def load(cls, config_file: Path = CONFIG_FILE, **flags: Any) -> CliConfig:
        """Resolve every setting, ignoring flags passed as None.

        Pass ``no_cache=True`` to disable the table cache whatever the layers say.
        """
        no_cache = bool(flags.pop("no_cache", False))
        unknown = set(flags) - {f.name for f in fields(cls)}
        if unknown:
            msg = f"Unknown settings: {', '.join(sorted(unknown))}"
            raise ConfigError(msg)

        raw: dict[str, Any] = {}
        raw.update(_read_ini(config_file))
        raw.update(_read_env())
        raw.update({key: value for key, value in flags.items() if value is not None})
        if no_cache:
            raw["cache_dir"] = None

        config = cls(**{key: _coerce(key, value) for key, value in raw.items()})
        logger.debug("Configuration: {}", config)

        return config


def _read_ini(path: Path) -> dict[str, str]:
    if not os.path.exists(path):
        return {}

    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as e:
        msg = f"Cannot parse {path}: {e}"
        raise ConfigError(msg) from e

    if not parser.has_section(CONFIG_SECTION):
        return {}

    return dict(parser.items(CONFIG_SECTION))


def _read_env() -> dict[str, str]:
    names = {"max_n": ENV_MAX_N, "cache_dir": ENV_CACHE_DIR, "seed": ENV_SEED}

    return {key: os.environ[name] for key, name in names.items() if os.environ.get(name)}


def _coerce(key: str, value: Any) -> Any:
    try:
        match key:
            case "max_n" | "seed" | "ld_budget":
                return int(value)
            case "cache_dir":
                return None if value is None else Path(value).expanduser()
            case "format":
                return OutputFormat(value)
    except ValueError as e:
        msg = f"Invalid value for {key}: {value!r}"
        raise ConfigError(msg) from e

    msg = f"Unknown setting {key}"
    raise ConfigError(msg)
