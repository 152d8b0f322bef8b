from pathlib import Path

import pytest

from laver_tables.config import CliConfig, OutputFormat
from laver_tables.constants import (
    CACHE_DIR,
    DEFAULT_SEED,
    ENV_CACHE_DIR,
    ENV_MAX_N,
    ENV_SEED,
    MAX_N,
)
from laver_tables.tables.exceptions import ConfigError


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in (ENV_MAX_N, ENV_SEED, ENV_CACHE_DIR):
        monkeypatch.delenv(name, raising=False)


def test_defaults(tmp_path):
    config = CliConfig.load(tmp_path / "missing.ini")

    assert config.max_n == MAX_N
    assert config.seed == DEFAULT_SEED
    assert config.cache_dir == CACHE_DIR
    assert config.format is OutputFormat.TEXT
    assert config.caching


def test_layers(tmp_path, monkeypatch):
    ini = tmp_path / "config.ini"
    ini.write_text("[laver]\nmax_n = 8\nseed = 1\nformat = json\n")
    monkeypatch.setenv(ENV_SEED, "2")

    config = CliConfig.load(ini, seed=None, max_n=6)

    assert config.max_n == 6
    assert config.seed == 2
    assert config.format is OutputFormat.JSON


def test_ini_without_section(tmp_path):
    ini = tmp_path / "config.ini"
    ini.write_text("[other]\nmax_n = 3\n")

    assert CliConfig.load(ini).max_n == MAX_N


def test_no_cache(tmp_path):
    config = CliConfig.load(tmp_path / "missing.ini", cache_dir="~/tables", no_cache=True)

    assert config.cache_dir is None
    assert not config.caching


def test_cache_dir_expanded(tmp_path):
    config = CliConfig.load(tmp_path / "missing.ini", cache_dir="~/tables")

    assert config.cache_dir == Path("~/tables").expanduser()


@pytest.mark.parametrize(
    "flags",
    [{"max_n": "many"}, {"format": "yaml"}, {"max_n": -1}, {"ld_budget": 0}, {"colour": "red"}],
)
def test_bad_settings(tmp_path, flags):
    with pytest.raises(ConfigError):
        CliConfig.load(tmp_path / "missing.ini", **flags)


def test_bad_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_MAX_N, "lots")

    with pytest.raises(ConfigError):
        CliConfig.load(tmp_path / "missing.ini")
