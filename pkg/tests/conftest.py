import sys

import pytest
from loguru import logger

from laver_tables.tables.laver import LaverTable, build_table

# Enable logging by running pytest with the `-s` switch
logger.remove()
logger.add(
    sys.stdout,
    format="{time:YYYY-MM-DD HH:mm:ss} | <level>{level:7s}</level> | {message}",
    level="DEBUG",
    colorize=True,
)


@pytest.fixture(scope="session")
def tables() -> dict[int, LaverTable]:
    return {n: build_table(n) for n in range(7)}


@pytest.fixture(scope="session")
def a1(tables):
    return tables[1]


@pytest.fixture(scope="session")
def a2(tables):
    return tables[2]


@pytest.fixture(scope="session")
def a3(tables):
    return tables[3]


@pytest.fixture(scope="session")
def a4(tables):
    return tables[4]
