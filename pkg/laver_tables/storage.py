"""Binary table files and the on-disk table cache.

File layout: b"LAVR", a version byte, one byte n, then for every row p in
ascending order its period followed by the period values, all as 32-bit
little-endian integers.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np
from loguru import logger

from laver_tables.tables.exceptions import SizeLimitExceeded, TableFormatError
from laver_tables.tables.laver import LaverTable, build_table

MAGIC = b"LAVR"
FORMAT_VERSION = 1
WORD = np.dtype("<u4")
HEADER_SIZE = len(MAGIC) + 2


def encode_table(table: LaverTable) -> bytes:
    """Serialize a table, every row prefixed by its period."""
    words = np.insert(table.values, table.offsets, table.periods).astype(WORD)

    return MAGIC + bytes((FORMAT_VERSION, table.n)) + words.tobytes()


def decode_table(data: bytes) -> LaverTable:
    """Parse a table file and validate the rows it contains."""
    if len(data) < HEADER_SIZE or data[: len(MAGIC)] != MAGIC:
        msg = f"Not a Laver table file, magic is {data[: len(MAGIC)]!r}"
        raise TableFormatError(msg)
    version, n = data[len(MAGIC)], data[len(MAGIC) + 1]
    if version != FORMAT_VERSION:
        msg = f"Unsupported table file version {version}"
        raise TableFormatError(msg)

    body = data[HEADER_SIZE:]
    if len(body) % WORD.itemsize:
        msg = f"Table body of {len(body)} bytes is not a whole number of words"
        raise TableFormatError(msg)
    words = np.frombuffer(body, dtype=WORD)

    rows = []
    position = 0
    for p in range(1, (1 << n) + 1):
        if position >= len(words):
            msg = f"File ends before row {p} of A_{n}"
            raise TableFormatError(msg)
        period = int(words[position])
        row = words[position + 1 : position + 1 + period]
        if len(row) != period:
            msg = f"Row {p} is truncated, {len(row)} of {period} values"
            raise TableFormatError(msg)
        rows.append(row.astype(np.uint32))
        position += 1 + period

    if position != len(words):
        msg = f"{len(words) - position} trailing words after row {1 << n}"
        raise TableFormatError(msg)

    return LaverTable.from_rows(n, rows)


def write_table(table: LaverTable, path: str | os.PathLike[str]) -> None:
    """Write a table file atomically: a temporary file is renamed into place."""
    target = Path(path)
    os.makedirs(target.parent, exist_ok=True)

    fd, temporary = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "wb") as fwrite:
            fwrite.write(encode_table(table))
        os.replace(temporary, target)
    except BaseException:
        os.unlink(temporary)
        raise

    logger.debug("Wrote A_{} to {}", table.n, target)


def read_table(path: str | os.PathLike[str]) -> LaverTable:
    with open(path, "rb") as fread:
        return decode_table(fread.read())


class TableCache:
    """Table files keyed by exponent under one directory."""

    def __init__(self, directory: str | os.PathLike[str]) -> None:
        self.directory = Path(directory)
        os.makedirs(self.directory, exist_ok=True)

    def path(self, n: int) -> Path:
        return self.directory / f"A{n}.lavr"

    def get(self, n: int, max_n: int | None = None) -> LaverTable:
        """Load A_n from the cache, building and storing it on a miss.

        A corrupt cache file is rebuilt rather than trusted.
        """
        if max_n is not None and n > max_n:
            msg = f"A_{n} exceeds the size cap n <= {max_n}"
            raise SizeLimitExceeded(msg)

        path = self.path(n)
        if path.exists():
            try:
                table = read_table(path)
            except TableFormatError as e:
                logger.warning("Discarding cached A_{}: {}", n, e)
            else:
                if table.n == n:
                    logger.debug("Loaded A_{} from {}", n, path)
                    return table
                logger.warning("Cache file {} holds A_{}, expected A_{}", path, table.n, n)

        table = build_table(n, max_n)
        write_table(table, path)
        logger.info("Cached A_{}: {}", n, path)

        return table

    def clear(self) -> int:
        """Remove every cached table file, returning how many were removed."""
        removed = 0
        for path in self.directory.glob("A*.lavr"):
            path.unlink()
            removed += 1

        return removed
