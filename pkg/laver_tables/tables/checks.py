"""Exhaustive and sampled identity checks on Laver tables."""

from __future__ import annotations

from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.constants import DEFAULT_SEED, LD_BUDGET, WITNESS_LIMIT
from laver_tables.tables.exceptions import UnknownSuite
from laver_tables.tables.laver import (
    NAIVE_MAX_N,
    LaverTable,
    build_table,
    expand_table,
    naive_table,
)

IntArray = npt.NDArray[np.int64]

# Exhaustive sweeps are evaluated in chunks of this many tuples
CHUNK_SIZE = 1 << 20


@dataclass(frozen=True)
class Failure:
    """Single violated case of a check."""

    case: str
    inputs: tuple[int, ...]
    expected: int
    actual: int

    def __str__(self) -> str:
        args = ", ".join(str(x) for x in self.inputs)
        return f"{self.case} at ({args}): expected {self.expected}, got {self.actual}"


@dataclass
class CheckReport:
    """Outcome of a check suite.

    ``failed`` counts every violated case, ``failures`` keeps the first
    WITNESS_LIMIT of them.
    """

    name: str
    total: int = 0
    failed: int = 0
    failures: list[Failure] = field(default_factory=list)
    sampled: bool = False

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, case: str, inputs: tuple[int, ...], expected: int, actual: int) -> None:
        """Count one case, keeping a witness when it fails."""
        self.total += 1
        if expected != actual:
            self.failed += 1
            if len(self.failures) < WITNESS_LIMIT:
                self.failures.append(Failure(case, inputs, expected, actual))

    def tally(
        self,
        case: str,
        inputs: tuple[npt.ArrayLike, ...],
        expected: npt.ArrayLike,
        actual: npt.ArrayLike,
    ) -> None:
        """Count a vector of cases at once."""
        expected_arr, actual_arr = np.broadcast_arrays(np.asarray(expected), np.asarray(actual))
        columns = np.broadcast_arrays(*(np.asarray(x) for x in inputs), expected_arr)[:-1]
        bad = np.flatnonzero((expected_arr != actual_arr).ravel())

        self.total += expected_arr.size
        self.failed += bad.size

        room = WITNESS_LIMIT - len(self.failures)
        for i in bad[: max(room, 0)]:
            self.failures.append(
                Failure(
                    case,
                    tuple(int(column.ravel()[i]) for column in columns),
                    int(expected_arr.ravel()[i]),
                    int(actual_arr.ravel()[i]),
                ),
            )

    def merge(self, other: CheckReport) -> CheckReport:
        """Combine two reports. The result keeps this report's name."""
        return CheckReport(
            name=self.name,
            total=self.total + other.total,
            failed=self.failed + other.failed,
            failures=(self.failures + other.failures)[:WITNESS_LIMIT],
            sampled=self.sampled or other.sampled,
        )

    __add__ = merge

    def summary(self) -> str:
        mode = "sampled" if self.sampled else "exhaustive"
        status = "pass" if self.passed else f"FAIL ({self.failed} violations)"

        return f"{self.name}: {status}, {self.total} cases ({mode})"


def merge_reports(name: str, reports: list[CheckReport]) -> CheckReport:
    """Fold a list of reports into one named report."""
    merged = CheckReport(name)
    for report in reports:
        merged = merged.merge(report)

    return merged


class Suite(Enum):
    """Identity suites over a single table."""

    LAST_COLUMN = "last-column"
    MONOTONE = "monotone"
    PLUS_ONE = "plus-one"
    LAST_ROWS = "last-rows"
    PARITY = "parity"
    VALUATION = "valuation"
    MONOID = "monoid"
    BONUS = "bonus"
    ALL = "all"

    def __str__(self) -> str:
        match self:
            case self.LAST_COLUMN:
                return "p ⊳ 2^n = 2^n"
            case self.MONOTONE:
                return "rows increase and p < p ⊳ q for p < 2^n"
            case self.PLUS_ONE:
                return "p ⊳ q = p ⊳ q' implies p ⊳ (q+1) = p ⊳ (q'+1)"
            case self.LAST_ROWS:
                return "(2^n - 1) ⊳ q = 2^n and 2^n ⊳ q = q"
            case self.PARITY:
                return "p ⊳ q is odd iff p is even and q is odd"
            case self.VALUATION:
                return "p ⊳ q = q iff q > 2^n - 2^v(p)"
            case self.MONOID:
                return "∘ is associative with unit 2^n and acts through ⊳"
            case self.BONUS:
                return "x ∘ y = (x ⊳ y) ∘ x and ⊳ distributes over ∘"
            case self.ALL:
                return "every identity suite"

    @classmethod
    def parse(cls, name: str | Suite) -> Suite:
        if isinstance(name, Suite):
            return name
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(suite.value for suite in cls)
            msg = f"Unknown suite '{name}', expected one of: {known}"
            raise UnknownSuite(msg) from None


def tuples(
    size: int,
    arity: int,
    budget: int = LD_BUDGET,
    seed: int = DEFAULT_SEED,
) -> Iterator[tuple[IntArray, ...]]:
    """Yield chunks of 1-based tuples over 1..size.

    Every tuple is produced when size^arity fits the budget, otherwise
    ``budget`` tuples are drawn uniformly with a seeded generator.
    """
    count = size**arity
    if count <= budget:
        for start in range(0, count, CHUNK_SIZE):
            flat = np.arange(start, min(start + CHUNK_SIZE, count), dtype=np.int64)
            yield tuple(c + 1 for c in np.unravel_index(flat, (size,) * arity))
        return

    rng = np.random.default_rng(seed)
    for start in range(0, budget, CHUNK_SIZE):
        draw = rng.integers(1, size + 1, size=(arity, min(CHUNK_SIZE, budget - start)))
        yield tuple(draw)


def is_sampled(size: int, arity: int, budget: int = LD_BUDGET) -> bool:
    return size**arity > budget


def compose_many(table: LaverTable, p: IntArray, q: IntArray) -> IntArray:
    """Vectorized p ∘ q."""
    shifted = table.apply_many(p, np.minimum(q + 1, table.size)) - 1

    return np.where(q == table.size, p, shifted)


def check_selfdistributivity(
    table: LaverTable,
    budget: int = LD_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """Check x ⊳ (y ⊳ z) = (x ⊳ y) ⊳ (x ⊳ z)."""
    report = CheckReport("selfdistributivity", sampled=is_sampled(table.size, 3, budget))
    logger.debug(
        "Sweeping left selfdistributivity on A_{} ({})",
        table.n,
        "sampled" if report.sampled else "exhaustive",
    )

    for x, y, z in tuples(table.size, 3, budget, seed):
        lhs = table.apply_many(x, table.apply_many(y, z))
        rhs = table.apply_many(table.apply_many(x, y), table.apply_many(x, z))
        report.tally("x⊳(y⊳z) = (x⊳y)⊳(x⊳z)", (x, y, z), rhs, lhs)

    return report


def _last_column(table: LaverTable, _budget: int, _seed: int) -> CheckReport:
    report = CheckReport(Suite.LAST_COLUMN.value)
    p = np.arange(1, table.size + 1)
    report.tally("p⊳2^n", (p,), table.size, table.apply_many(p, table.size))

    return report


def _monotone(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.MONOTONE.value, sampled=is_sampled(table.size, 2, budget))

    for p, q in tuples(table.size, 2, budget, seed):
        lower = p < table.size
        p, q = p[lower], q[lower]
        report.tally("p < p⊳q", (p, q), 1, table.apply_many(p, q) > p)

    for p in range(1, table.size + 1):
        steps = np.diff(table.row(p).astype(np.int64))
        report.record("row increases", (p,), 1, int(bool(np.all(steps > 0))))

    return report


def _plus_one(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.PLUS_ONE.value, sampled=is_sampled(table.size, 3, budget))

    for p, q, r in tuples(table.size, 3, budget, seed):
        q_next = q % table.size + 1
        r_next = r % table.size + 1
        equal = table.apply_many(p, q) == table.apply_many(p, r)
        follows = table.apply_many(p, q_next) == table.apply_many(p, r_next)
        report.tally("p⊳q = p⊳q' ⇒ p⊳(q+1) = p⊳(q'+1)", (p, q, r), 1, ~equal | follows)

    return report


def _last_rows(table: LaverTable, _budget: int, _seed: int) -> CheckReport:
    report = CheckReport(Suite.LAST_ROWS.value)
    q = np.arange(1, table.size + 1)
    report.tally("2^n⊳q = q", (q,), q, table.apply_many(table.size, q))
    if table.n > 0:
        report.tally("(2^n-1)⊳q = 2^n", (q,), table.size, table.apply_many(table.size - 1, q))

    return report


def _parity(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.PARITY.value, sampled=is_sampled(table.size, 2, budget))
    if table.n == 0:
        return report

    for p, q in tuples(table.size, 2, budget, seed):
        odd = table.apply_many(p, q) % 2 == 1
        report.tally("p⊳q odd ⇔ p even, q odd", (p, q), (p % 2 == 0) & (q % 2 == 1), odd)

    return report


def _valuation(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.VALUATION.value, sampled=is_sampled(table.size, 2, budget))

    for p, q in tuples(table.size, 2, budget, seed):
        # p & -p is 2^v(p), and 2^n for p = 2^n
        fixed = table.apply_many(p, q) == q
        report.tally("p⊳q = q ⇔ q > 2^n - 2^v(p)", (p, q), q > table.size - (p & -p), fixed)

    return report


def _monoid(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.MONOID.value, sampled=is_sampled(table.size, 3, budget))

    for p, q, r in tuples(table.size, 3, budget, seed):
        pq = compose_many(table, p, q)
        report.tally(
            "(p∘q)∘r = p∘(q∘r)",
            (p, q, r),
            compose_many(table, p, compose_many(table, q, r)),
            compose_many(table, pq, r),
        )
        report.tally(
            "(p∘q)⊳r = p⊳(q⊳r)",
            (p, q, r),
            table.apply_many(p, table.apply_many(q, r)),
            table.apply_many(pq, r),
        )

    p = np.arange(1, table.size + 1)
    unit = np.full_like(p, table.size)
    report.tally("p∘2^n = p", (p,), p, compose_many(table, p, unit))
    report.tally("2^n∘p = p", (p,), p, compose_many(table, unit, p))

    return report


def _bonus(table: LaverTable, budget: int, seed: int) -> CheckReport:
    report = CheckReport(Suite.BONUS.value, sampled=is_sampled(table.size, 3, budget))

    for x, y in tuples(table.size, 2, budget, seed):
        report.tally(
            "x∘y = (x⊳y)∘x",
            (x, y),
            compose_many(table, table.apply_many(x, y), x),
            compose_many(table, x, y),
        )

    for x, y, z in tuples(table.size, 3, budget, seed):
        report.tally(
            "x⊳(y∘z) = (x⊳y)∘(x⊳z)",
            (x, y, z),
            compose_many(table, table.apply_many(x, y), table.apply_many(x, z)),
            table.apply_many(x, compose_many(table, y, z)),
        )

    return report


SUITES: dict[Suite, Callable[[LaverTable, int, int], CheckReport]] = {
    Suite.LAST_COLUMN: _last_column,
    Suite.MONOTONE: _monotone,
    Suite.PLUS_ONE: _plus_one,
    Suite.LAST_ROWS: _last_rows,
    Suite.PARITY: _parity,
    Suite.VALUATION: _valuation,
    Suite.MONOID: _monoid,
    Suite.BONUS: _bonus,
}


def check_identities(
    table: LaverTable,
    suite: Suite | str,
    budget: int = LD_BUDGET,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """Run one named identity suite, or every suite for ``all``."""
    chosen = Suite.parse(suite)
    if chosen is Suite.ALL:
        reports = [run(table, budget, seed) for run in SUITES.values()]
        return merge_reports(Suite.ALL.value, reports)

    report = SUITES[chosen](table, budget, seed)
    logger.debug("Suite '{}' on A_{}: {}", chosen.value, table.n, report.summary())

    return report


def check_construction(table: LaverTable) -> CheckReport:
    """Compare the compressed table against independent constructions.

    The naive recurrence rebuilds the dense table, and A_(n-1) together
    with the thresholds must expand back to the same rows.
    """
    report = CheckReport("construction")

    if table.n <= NAIVE_MAX_N:
        elements = np.arange(1, table.size + 1)
        reference = naive_table(table.n)
        report.tally(
            "naive recurrence",
            (elements[:, None], elements[None, :]),
            reference,
            table.dense,
        )

    if table.n > 0:
        expanded = expand_table(build_table(table.n - 1, table.n), table.thresholds)
        for p in range(1, table.size + 1):
            same = np.array_equal(expanded.row(p), table.row(p))
            report.record("expansion from A_(n-1)", (p,), 1, int(same))

    return report
