"""Column sets and the divisibility order q ◁ r on a Laver table."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.constants import POSET_MAX_N
from laver_tables.tables.checks import CheckReport, merge_reports
from laver_tables.tables.exceptions import DomainError, SizeLimitExceeded
from laver_tables.tables.laver import LaverTable, build_table
from laver_tables.tables.utils import check_element

BoolArray = npt.NDArray[np.bool_]


def _require_poset_size(table: LaverTable) -> None:
    if table.n > POSET_MAX_N:
        msg = f"Poset computations stop at n = {POSET_MAX_N}, got A_{table.n}"
        raise SizeLimitExceeded(msg)


def column_set(table: LaverTable, q: int) -> frozenset[int]:
    """Col(q) = {p ⊳ q : p in A_n}."""
    check_element(q, table.size, "Column")
    values = table.apply_many(np.arange(1, table.size + 1), q)

    return frozenset(int(v) for v in np.unique(values))


def column_matrix(table: LaverTable) -> BoolArray:
    """Boolean matrix with [q - 1, v - 1] set iff v ∈ Col(q).

    Row q is both the column set of q and the set of r with q ◁ r.
    """
    _require_poset_size(table)

    def scatter() -> BoolArray:
        size = table.size
        columns = np.zeros((size, size), dtype=np.bool_)
        # dense[p, q] lands in column q: scatter the values by column index
        column_index = np.broadcast_to(np.arange(size), (size, size))
        columns[column_index.ravel(), table.index.ravel()] = True
        return columns

    return table.memo("columns", scatter)


def divides(table: LaverTable, q: int, r: int) -> bool:
    """q ◁ r iff r ∈ Col(q)."""
    check_element(q, table.size)
    check_element(r, table.size)

    return bool(column_matrix(table)[q - 1, r - 1])


@dataclass(frozen=True, eq=False)
class DivisibilityPoset:
    """Divisibility order ◁_n, stored as its relation matrix."""

    n: int
    relation: BoolArray

    @property
    def size(self) -> int:
        return 1 << self.n

    def divides(self, q: int, r: int) -> bool:
        check_element(q, self.size)
        check_element(r, self.size)

        return bool(self.relation[q - 1, r - 1])

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges (a, b), a ◁ b with nothing strictly between."""
        strict = self.relation & ~np.eye(self.size, dtype=np.bool_)
        # float32 products are exact for counts up to 2^24
        as_float = strict.astype(np.float32)
        through = (as_float @ as_float) > 0
        edges = np.argwhere(strict & ~through)

        return sorted((int(a) + 1, int(b) + 1) for a, b in edges)

    @cached_property
    def graph(self) -> nx.DiGraph:
        """Hasse diagram as a directed graph, edges pointing upward."""
        graph = nx.DiGraph()
        graph.add_nodes_from(range(1, self.size + 1))
        graph.add_edges_from(self.covers)

        return graph

    def upper_bounds(self, a: int, b: int) -> BoolArray:
        return self.relation[a - 1] & self.relation[b - 1]

    def lower_bounds(self, a: int, b: int) -> BoolArray:
        return self.relation[:, a - 1] & self.relation[:, b - 1]

    def lub(self, a: int, b: int) -> int | None:
        """Least upper bound of a and b, None if it does not exist."""
        check_element(a, self.size)
        check_element(b, self.size)
        bounds = self.upper_bounds(a, b)
        for u in np.flatnonzero(bounds):
            if np.all(self.relation[u, bounds]):
                return int(u) + 1

        return None

    def glb(self, a: int, b: int) -> int | None:
        """Greatest lower bound of a and b, None if it does not exist."""
        check_element(a, self.size)
        check_element(b, self.size)
        bounds = self.lower_bounds(a, b)
        for g in np.flatnonzero(bounds):
            if np.all(self.relation[bounds, g]):
                return int(g) + 1

        return None

    def is_lattice(self) -> tuple[bool, tuple[int, int] | None]:
        """Return (True, None) or (False, first pair without lub or glb)."""
        for a in range(1, self.size + 1):
            for b in range(a + 1, self.size + 1):
                if self.lub(a, b) is None or self.glb(a, b) is None:
                    logger.debug("◁_{} is not a lattice, witness ({}, {})", self.n, a, b)
                    return False, (a, b)

        return True, None

    def linear_extension(self) -> list[int]:
        """Smallest-first topological order of the Hasse diagram."""
        return list(nx.lexicographical_topological_sort(self.graph))


def divisibility_poset(table: LaverTable) -> DivisibilityPoset:
    """Divisibility order of A_n, refused above POSET_MAX_N."""
    return DivisibilityPoset(table.n, column_matrix(table))


def hasse(table: LaverTable) -> DivisibilityPoset:
    """Divisibility poset of A_n; its ``covers`` and ``graph`` hold the Hasse diagram."""
    return divisibility_poset(table)


def lub(table: LaverTable, a: int, b: int) -> int | None:
    return divisibility_poset(table).lub(a, b)


def glb(table: LaverTable, a: int, b: int) -> int | None:
    return divisibility_poset(table).glb(a, b)


def is_lattice(table: LaverTable) -> tuple[bool, tuple[int, int] | None]:
    return divisibility_poset(table).is_lattice()


def basis_change_matrix(table: LaverTable) -> npt.NDArray[np.int64]:
    """Unitriangular matrix M with M[r - 1, q - 1] = 1 iff r ◁ q.

    Expresses the ψ family in the φ family, ψ_q = Σ_r M[r, q] φ_r, and is
    triangular once rows and columns follow a linear extension.
    """
    return column_matrix(table).astype(np.int64)


def check_order_axioms(table: LaverTable) -> CheckReport:
    """Reflexivity, antisymmetry and transitivity of ◁, columns pairwise distinct."""
    relation = column_matrix(table)
    size = table.size
    report = CheckReport("order")
    elements = np.arange(1, size + 1)

    report.tally("q ◁ q", (elements,), 1, np.diagonal(relation))

    both_ways = relation & relation.T
    report.tally(
        "q ◁ r ◁ q ⇒ q = r",
        (elements[:, None], elements[None, :]),
        np.eye(size, dtype=np.bool_),
        both_ways,
    )

    as_float = relation.astype(np.float32)
    closure = (as_float @ as_float) > 0
    report.tally(
        "q ◁ s ◁ r ⇒ q ◁ r",
        (elements[:, None], elements[None, :]),
        1,
        ~closure | relation,
    )

    distinct = np.unique(relation, axis=0).shape[0]
    report.record("distinct columns", (size,), size, distinct)

    return report


def check_structure(table: LaverTable) -> CheckReport:
    """Structural facts about columns and the top of the order."""
    relation = column_matrix(table)
    size, half, n = table.size, table.half, table.n
    reports = []

    if n >= 1:
        report = CheckReport("column splitting")
        for q in range(1, half + 1):
            lower, upper = relation[q - 1].copy(), relation[q + half - 1]
            report.record("q ∉ Col(q + 2^(n-1))", (q,), 0, int(upper[q - 1]))
            lower[q - 1] = False
            same = int(np.array_equal(lower, upper))
            report.record("Col(q) = Col(q + 2^(n-1)) ⊔ {q}", (q,), 1, same)
            between = relation[q - 1] & relation[:, q + half - 1]
            between[[q - 1, q + half - 1]] = False
            report.record("q + 2^(n-1) covers q", (q,), 0, int(between.sum()))
        reports.append(report)

        report = CheckReport("bottom")
        for p in range(2, size + 1):
            report.record("2^(n-1) + 1 ◁ p", (p,), 1, int(relation[half, p - 1]))
        reports.append(report)

        report = CheckReport("projection order")
        previous = column_matrix(build_table(n - 1, n))
        report.tally(
            "r ◁_(n-1) q ⇔ r + 2^(n-1) ◁_n q + 2^(n-1)",
            (np.arange(1, half + 1)[:, None], np.arange(1, half + 1)[None, :]),
            previous,
            relation[half:, half:],
        )
        reports.append(report)

    if n >= 2:
        report = CheckReport("top chain")
        anchor = size - size // 4
        for p in range(1, size):
            if p != half:
                report.record("p ◁ 2^n - 2^(n-2)", (p,), 1, int(relation[p - 1, anchor - 1]))
        top = int(relation[anchor - 1, half - 1])
        report.record("2^n - 2^(n-2) ◁ 2^(n-1)", (anchor,), 1, top)
        report.record("2^(n-1) ◁ 2^n", (half,), 1, int(relation[half - 1, size - 1]))
        quarter = size // 4
        landing = table.apply(quarter, anchor)
        report.record("2^(n-2) ⊳ (2^n - 2^(n-2))", (quarter, anchor), half, landing)
        reports.append(report)

    return merge_reports("structure", reports)


def occurrence_constraints(
    max_n: int,
    r: int,
    m: int | None = None,
) -> tuple[int, frozenset[int]]:
    """Residues q mod 2^m for which 2^m - r occurs in column q of A_m.

    m defaults to the smallest exponent with r < 2^m; any m up to max_n with
    r < 2^m is accepted. For every n >= m the value 2^n - r occurs in Col_n(q)
    exactly when q mod 2^m is in the returned set.
    """
    if r < 1:
        msg = f"Offset must be positive, got {r}"
        raise DomainError(msg)
    if m is None:
        m = r.bit_length()
    if max_n < m:
        msg = f"2^{max_n} - {r} is not an element of A_{max_n}"
        raise DomainError(msg)
    if r >= 1 << m:
        msg = f"2^{m} - {r} is not an element of A_{m}"
        raise DomainError(msg)

    base = build_table(m, max_n)
    columns = column_matrix(base)
    residues = frozenset(q for q in range(1, base.size + 1) if columns[q - 1, base.size - r - 1])

    return m, residues


def check_occurrence(max_n: int, r: int) -> CheckReport:
    """Whether 2^n - r occurs in Col_n(q) depends only on q mod 2^m.

    Checked for every base m with r < 2^m <= 2^max_n, against every n from m
    to max_n.

    r = 0 stands for the value 2^n itself, which occurs in every column.
    """
    report = CheckReport(f"occurrence r={r}")
    if r == 0:
        for n in range(max_n + 1):
            table = build_table(n, max_n)
            report.tally(
                "2^n ∈ Col(q)",
                (np.arange(1, table.size + 1),),
                1,
                column_matrix(table)[:, table.size - 1],
            )
        return report

    for m in range(r.bit_length(), max_n + 1):
        _, residues = occurrence_constraints(max_n, r, m)
        for n in range(m, max_n + 1):
            table = build_table(n, max_n)
            columns = column_matrix(table)
            q = np.arange(1, table.size + 1)
            expected = np.isin((q - 1) % (1 << m) + 1, list(residues))
            report.tally(
                f"2^n - r ∈ Col_n(q), base m={m}",
                (q,),
                expected,
                columns[:, table.size - r - 1],
            )

    if r == 1:
        for n in range(1, max_n + 1):
            table = build_table(n, max_n)
            columns = column_matrix(table)
            q = np.arange(1, table.size + 1)
            odd = q % 2 == 1
            report.tally("2^n - 1 ∈ Col_n(q) ⇔ q odd", (q,), odd, columns[:, table.size - 2])

    return report


def before(table: LaverTable, x: int, y: int) -> bool:
    """x ⊲̄ y: y lies in row x, i.e. x ⊳ p = y for some p."""
    check_element(y, table.size)

    return bool(np.any(table.row(x) == y))


def check_beforesym(table: LaverTable) -> CheckReport:
    """Exhibit that x ⊲̄ y, meaning x ⊳ p = y for some p, is not transitive.

    1 ⊲̄ 2^n ⊲̄ 1 holds while 1 ⊲̄ 1 fails. Vacuous on A_0.
    """
    report = CheckReport("beforesym")
    if table.n == 0:
        return report

    report.record("1 ⊲̄ 2^n", (1, table.size), 1, int(before(table, 1, table.size)))
    report.record("2^n ⊲̄ 1", (table.size, 1), 1, int(before(table, table.size, 1)))
    report.record("not 1 ⊲̄ 1", (1, 1), 0, int(before(table, 1, 1)))

    return report
