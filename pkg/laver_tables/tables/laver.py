"""Laver table construction and period-compressed lookups."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import cache
from typing import Any, TypeVar

import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.constants import DENSE_MAX_N, MAX_N
from laver_tables.tables.exceptions import DomainError, SizeLimitExceeded, TableFormatError
from laver_tables.tables.utils import check_element, is_power_of_two, mod_rep

ROW_DTYPE = np.uint32

# Exponent cap for the naive (unrolled, non-periodic) reference construction
NAIVE_MAX_N = 10

Row = npt.NDArray[np.uint32]
IntArray = npt.NDArray[np.int64]
T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class LaverTable:
    """Laver table A_n stored one period per row.

    Row p occupies ``values[offsets[p - 1] : offsets[p - 1] + periods[p - 1]]``
    and p ⊳ q is read as ``row[(q - 1) mod per(p)]``. All periods are powers
    of 2, so the modulus is a bit mask.
    """

    n: int
    periods: Row
    offsets: IntArray
    values: Row
    thresholds: tuple[int, ...]
    _derived: dict[str, Any] = field(default_factory=dict, init=False, repr=False)

    @property
    def size(self) -> int:
        """Number of elements, 2^n."""
        return 1 << self.n

    @property
    def half(self) -> int:
        """2^(n-1), the size of the table this one projects onto."""
        return self.size >> 1

    def row(self, p: int) -> Row:
        """Period of row p, (p ⊳ 1, ..., p ⊳ per(p))."""
        check_element(p, self.size, "Row")
        start = int(self.offsets[p - 1])

        return self.values[start : start + int(self.periods[p - 1])]

    @property
    def rows(self) -> list[Row]:
        return [self.row(p) for p in range(1, self.size + 1)]

    def left_translation(self, p: int) -> Row:
        """Full row (p ⊳ 1, ..., p ⊳ 2^n), the period repeated."""
        period = self.row(p)

        return np.tile(period, self.size // len(period))

    def apply(self, p: int, q: int) -> int:
        """Return p ⊳ q."""
        check_element(p, self.size, "Left operand")
        check_element(q, self.size, "Right operand")

        return int(self.values[self.offsets[p - 1] + ((q - 1) & (int(self.periods[p - 1]) - 1))])

    def apply_many(self, p: npt.ArrayLike, q: npt.ArrayLike) -> IntArray:
        """Vectorized p ⊳ q over broadcast arrays of 1-based elements."""
        left, right = np.broadcast_arrays(
            np.asarray(p, dtype=np.int64),
            np.asarray(q, dtype=np.int64),
        )
        if left.size and (left.min() < 1 or left.max() > self.size):
            msg = f"Left operands must lie in 1..{self.size}"
            raise DomainError(msg)
        if right.size and (right.min() < 1 or right.max() > self.size):
            msg = f"Right operands must lie in 1..{self.size}"
            raise DomainError(msg)

        masks = self.periods.astype(np.int64)[left - 1] - 1
        positions = self.offsets[left - 1] + ((right - 1) & masks)

        return self.values[positions].astype(np.int64)

    def period(self, p: int) -> int:
        """Smallest q with p ⊳ q = 2^n."""
        check_element(p, self.size, "Row")

        return int(self.periods[p - 1])

    def threshold(self, p: int) -> int:
        """Number of leading entries row p of A_n shares with row p of A_(n-1)."""
        if self.n == 0:
            msg = "Thresholds are undefined on A_0"
            raise DomainError(msg)
        check_element(p, self.half, "Row")

        return self.thresholds[p - 1]

    def compose(self, p: int, q: int) -> int:
        """Return p ∘ q, with p ∘ 2^n = p."""
        check_element(p, self.size, "Left operand")
        check_element(q, self.size, "Right operand")
        if q == self.size:
            return p

        return self.apply(p, q + 1) - 1

    def memo(self, key: str, factory: Callable[[], T]) -> T:
        """Compute a structure derived from this table once and keep it."""
        if key not in self._derived:
            self._derived[key] = factory()

        return self._derived[key]

    @property
    def dense(self) -> IntArray:
        """Unrolled 2^n x 2^n table, entry [p - 1, q - 1] = p ⊳ q."""
        if self.n > DENSE_MAX_N:
            msg = f"Refusing to unroll A_{self.n}, dense tables stop at n = {DENSE_MAX_N}"
            raise SizeLimitExceeded(msg)
        elements = np.arange(1, self.size + 1)

        return self.memo("dense", lambda: self.apply_many(elements[:, None], elements[None, :]))

    @property
    def index(self) -> IntArray:
        """Dense table with 0-based elements, usable for fancy indexing."""
        return self.memo("index", lambda: self.dense - 1)

    def composition_table(self) -> IntArray:
        """Dense table of the composition p ∘ q."""
        composed = np.empty((self.size, self.size), dtype=np.int64)
        composed[:, :-1] = self.dense[:, 1:] - 1
        composed[:, -1] = np.arange(1, self.size + 1)

        return composed

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaverTable):
            return NotImplemented

        return (
            self.n == other.n
            and np.array_equal(self.periods, other.periods)
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.values.tobytes()))

    @classmethod
    def from_rows(cls, n: int, rows: Sequence[Sequence[int]]) -> LaverTable:
        """Build a table from explicit period rows, validating their shape."""
        arrays = [np.asarray(row, dtype=ROW_DTYPE) for row in rows]
        _validate_rows(n, arrays)

        return cls._assemble(n, arrays)

    @classmethod
    def _unchecked(cls, n: int, rows: Sequence[Sequence[int]]) -> LaverTable:
        """Build a table without validation. Only used to plant faults in tests."""
        return cls._assemble(n, [np.asarray(row, dtype=ROW_DTYPE) for row in rows])

    @classmethod
    def _assemble(cls, n: int, rows: list[Row]) -> LaverTable:
        periods = np.array([len(row) for row in rows], dtype=ROW_DTYPE)
        offsets = np.zeros(len(rows), dtype=np.int64)
        offsets[1:] = np.cumsum(periods, dtype=np.int64)[:-1]

        return cls(
            n=n,
            periods=periods,
            offsets=offsets,
            values=np.concatenate(rows).astype(ROW_DTYPE),
            thresholds=_read_thresholds(n, rows),
        )


def _validate_rows(n: int, rows: list[Row]) -> None:
    size = 1 << n
    if len(rows) != size:
        msg = f"A_{n} needs {size} rows, got {len(rows)}"
        raise TableFormatError(msg)

    for p, row in enumerate(rows, start=1):
        if not is_power_of_two(len(row)) or len(row) > size:
            msg = f"Row {p} has period {len(row)}, expected a power of 2 up to {size}"
            raise TableFormatError(msg)
        if row[0] != mod_rep(p + 1, size) or row[-1] != size:
            msg = f"Row {p} must start at {mod_rep(p + 1, size)} and end at {size}"
            raise TableFormatError(msg)
        if len(row) > 1 and np.any(np.diff(row.astype(np.int64)) <= 0):
            msg = f"Row {p} is not strictly increasing"
            raise TableFormatError(msg)


def _read_thresholds(n: int, rows: list[Row]) -> tuple[int, ...]:
    """Thresholds of A_n from its own rows.

    Projection onto A_(n-1) is a homomorphism, so p ⊳ q agrees with A_(n-1)
    exactly while it stays at or below 2^(n-1). Rows increase, so those
    entries form a prefix.
    """
    if n == 0:
        return ()
    half = 1 << (n - 1)

    return tuple(
        int(np.searchsorted(rows[p - 1], half, side="right")) for p in range(1, half + 1)
    )


def _construct_rows(n: int) -> list[Row]:
    size = 1 << n
    rows: list[list[int]] = [[] for _ in range(size)]
    rows[size - 1] = list(range(1, size + 1))

    # Rows are filled bottom-up: p ⊳ q > p, so every row read below is complete
    for p in range(size - 1, 0, -1):
        successor = p + 1
        row = [successor]
        while row[-1] != size:
            target = rows[row[-1] - 1]
            row.append(target[(successor - 1) & (len(target) - 1)])
        rows[p - 1] = row

    return [np.asarray(row, dtype=ROW_DTYPE) for row in rows]


@cache
def _build(n: int) -> LaverTable:
    logger.debug("Building A_{}", n)
    table = LaverTable._assemble(n, _construct_rows(n))
    logger.debug("A_{} built, {} stored entries", n, table.values.size)

    return table


def build_table(n: int, max_n: int | None = None) -> LaverTable:
    """Return A_n. Tables are cached per exponent for the life of the process."""
    limit = MAX_N if max_n is None else max_n
    if n < 0:
        msg = f"Table exponent must be non-negative, got {n}"
        raise DomainError(msg)
    if n > limit:
        msg = f"A_{n} exceeds the size cap n <= {limit}"
        raise SizeLimitExceeded(msg)

    return _build(n)


def clear_table_cache() -> None:
    """Forget every table built so far."""
    _build.cache_clear()


def expand_table(previous: LaverTable, thresholds: Sequence[int]) -> LaverTable:
    """Rebuild A_n from A_(n-1) and the thresholds of A_n.

    Row p < 2^(n-1) follows A_(n-1) for its first thres(p) entries and is
    shifted by 2^(n-1) afterwards; the period doubles exactly when the whole
    period of A_(n-1) agrees. The upper half is the lower half shifted.
    """
    half = previous.size
    n = previous.n + 1
    if len(thresholds) != half:
        msg = f"Expanding to A_{n} needs {half} thresholds, got {len(thresholds)}"
        raise DomainError(msg)

    rows: list[Row] = []
    for p in range(1, half + 1):
        before = previous.row(p).astype(np.int64)
        cut = thresholds[p - 1]
        if not 0 <= cut <= len(before):
            msg = f"Threshold {cut} of row {p} exceeds the period {len(before)}"
            raise DomainError(msg)
        row = np.concatenate((before[:cut], before[cut:] + half))
        if cut == len(before):
            row = np.concatenate((row, before + half))
        rows.append(row.astype(ROW_DTYPE))

    rows.extend((previous.row(p).astype(np.int64) + half).astype(ROW_DTYPE) for p in range(1, half))
    rows.append(np.arange(1, 2 * half + 1, dtype=ROW_DTYPE))
    _validate_rows(n, rows)

    return LaverTable._assemble(n, rows)


def naive_table(n: int) -> IntArray:
    """Dense A_n straight from the defining recurrence, without periods.

    Used as an independent reference for the compressed construction.
    """
    if not 0 <= n <= NAIVE_MAX_N:
        msg = f"Naive construction only supports 0 <= n <= {NAIVE_MAX_N}, got {n}"
        raise SizeLimitExceeded(msg)

    size = 1 << n
    table = np.zeros((size + 1, size + 1), dtype=np.int64)
    table[size, 1:] = np.arange(1, size + 1)
    for p in range(size - 1, 0, -1):
        table[p, 1] = p + 1
        for q in range(1, size):
            table[p, q + 1] = table[table[p, q], p + 1]

    return table[1:, 1:]


def project(n: int, m: int, p: int) -> int:
    """Canonical projection A_n -> A_m, p mod 2^m."""
    if not 0 <= m <= n:
        msg = f"Cannot project A_{n} onto A_{m}"
        raise DomainError(msg)
    check_element(p, 1 << n)

    return mod_rep(p, 1 << m)
