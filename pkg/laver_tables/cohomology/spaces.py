"""Cocycle spaces, coboundaries and cohomology groups of A_n."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from laver_tables.cohomology.cochain import Cochain, differential_rows
from laver_tables.cohomology.cocycles import (
    Family,
    basis2,
    basis3,
    const_cochain,
    phi3,
    psi2,
)
from laver_tables.cohomology.linalg import ColumnEchelon, QuotientGroup, quotient_of_kernel
from laver_tables.tables.checks import CheckReport, merge_reports
from laver_tables.tables.exceptions import DomainError
from laver_tables.tables.laver import LaverTable


def expected_cocycle_rank(n: int, k: int) -> int | None:
    """Rank of the k-cocycles on A_n where it is known in closed form."""
    match k:
        case 1:
            return 1
        case 2:
            return 1 << n
        case 3:
            return (1 << 2 * n) - (1 << n) + 1
        case 4:
            return (1 << 3 * n) - (1 << 2 * n) + (1 << n)

    return None


def differential_echelon(table: LaverTable, k: int) -> ColumnEchelon:
    """Column echelon form of δ^k, kept on the table once computed."""

    def reduce() -> ColumnEchelon:
        rows = differential_rows(table, k)
        logger.info("Reducing δ^{} on A_{} ({} x {})", k, table.n, len(rows), table.size**k)
        echelon = ColumnEchelon(table.size**k, rows)
        logger.info(
            "δ^{} on A_{} has rank {}, nullity {}",
            k,
            table.n,
            echelon.rank,
            echelon.nullity,
        )
        return echelon

    return table.memo(f"echelon-{k}", reduce)


def kernel_cochains(table: LaverTable, k: int) -> list[Cochain]:
    """Saturated basis of the k-cocycles, as computed (not the explicit families)."""
    return [
        Cochain(table.n, k, np.array(vector, dtype=np.int64))
        for vector in differential_echelon(table, k).kernel_vectors()
    ]


def cocycle_rank(table: LaverTable, k: int) -> int:
    return differential_echelon(table, k).nullity


def coboundary_rank(table: LaverTable, k: int) -> int:
    """Rank of the k-coboundaries, the image of δ^(k-1)."""
    if k < 2:  # noqa: PLR2004
        return 0

    return differential_echelon(table, k - 1).rank


def _family_echelon(members: tuple[Cochain, ...]) -> ColumnEchelon:
    matrix = np.stack([member.values for member in members], axis=1)
    rows = ({int(j): int(row[j]) for j in np.flatnonzero(row)} for row in matrix)

    return ColumnEchelon(len(members), rows)


@dataclass
class CocycleSpaceReport:
    """Computed rank of the k-cocycles and how an explicit family relates to it."""

    n: int
    k: int
    rank: int
    expected_rank: int | None
    family: str
    family_size: int
    all_cocycles: bool
    independent: bool
    spans: bool

    @property
    def passed(self) -> bool:
        return (
            self.rank == self.expected_rank
            and self.family_size == self.rank
            and self.all_cocycles
            and self.independent
            and self.spans
        )

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"Z^{self.k}(A_{self.n}): rank {self.rank} (expected {self.expected_rank}), "
            f"{self.family} family of {self.family_size}: "
            f"independent={self.independent}, spans={self.spans} -> {status}"
        )


def cocycle_space(
    table: LaverTable,
    k: int,
    family: Family | str = Family.PSI,
    *,
    prime: bool = False,
) -> CocycleSpaceReport:
    """Compare the computed k-cocycles with the explicit basis.

    The family is a basis exactly when it lies in the kernel, is linearly
    independent, and every computed kernel vector is an integer combination
    of it.
    """
    match k:
        case 2:
            chosen = Family(family)
            members = basis2(table, chosen).members
            label = chosen.value
        case 3:
            members = basis3(table, prime=prime).members
            label = "phi'" if prime else "phi"
        case _:
            msg = f"Explicit cocycle bases exist for k = 2, 3, got {k}"
            raise DomainError(msg)

    echelon = differential_echelon(table, k)
    kernel = echelon.kernel_vectors()
    in_family = _family_echelon(members)

    in_kernel = ColumnEchelon.from_matrix(echelon.kernel_matrix())
    report = CocycleSpaceReport(
        n=table.n,
        k=k,
        rank=echelon.nullity,
        expected_rank=expected_cocycle_rank(table.n, k),
        family=label,
        family_size=len(members),
        all_cocycles=all(in_kernel.solve(m.values.tolist()) is not None for m in members),
        independent=in_family.rank == len(members),
        spans=all(in_family.solve(vector) is not None for vector in kernel),
    )
    logger.debug(report.summary())

    return report


def _image_columns(table: LaverTable, k: int) -> list[list[int]]:
    """Columns of δ^(k-1), i.e. δ of every indicator (k-1)-cochain."""
    if k < 2:  # noqa: PLR2004
        return []

    rows = differential_rows(table, k - 1)
    columns = [[0] * len(rows) for _ in range(table.size ** (k - 1))]
    for r, row in enumerate(rows):
        for column, value in row.items():
            columns[column][r] = value

    return columns


def cohomology(table: LaverTable, k: int) -> QuotientGroup:
    """H^k(A_n) = ker δ^k / im δ^(k-1) through Smith normal form."""
    if k < 1:
        msg = f"Cohomology degree must be positive, got {k}"
        raise DomainError(msg)

    group = quotient_of_kernel(differential_echelon(table, k), _image_columns(table, k))
    logger.info("H^{}(A_{}) = {}", k, table.n, group)

    return group


def is_coboundary(table: LaverTable, cochain: Cochain) -> tuple[bool, Cochain | None]:
    """Whether φ = δθ for an integer cochain θ, with θ as witness."""
    k = cochain.arity
    if k <= 1:
        witness = Cochain.zero(table.n, 0) if cochain.is_zero() else None
        return witness is not None, witness

    solution = differential_echelon(table, k - 1).solve(cochain.values.tolist())
    if solution is None:
        return False, None

    return True, Cochain(table.n, k - 1, np.array(solution, dtype=np.int64))


def check_two_cocycle_lemmas(table: LaverTable) -> CheckReport:
    """Structural facts every 2-cocycle satisfies, over the computed kernel basis."""
    size, half = table.size, table.half
    report = CheckReport("2-cocycle lemmas")
    kernel = kernel_cochains(table, 2)

    for b, cocycle in enumerate(kernel, start=1):
        phi = cocycle.as_matrix()
        corner = int(phi[size - 1, size - 1])
        report.record("last column constant", (b,), 1, int(np.all(phi[:, -1] == phi[0, -1])))
        report.record("last row constant", (b,), 1, int(np.all(phi[-1] == corner)))
        if table.n == 0:
            continue
        column = phi[: size - 1, half - 1]
        second_half = phi[half - 1, half:]
        flat = int(np.all(column == column[0]))
        report.record("column 2^(n-1) constant above the last row", (b,), 1, flat)
        tail = int(np.all(second_half == corner))
        report.record("second half of row 2^(n-1) equals v", (b,), 1, tail)
        for q in range(1, half):
            coincide = np.array_equal(phi[:, q - 1], phi[:, q + half - 1])
            report.record(
                "columns q, q + 2^(n-1) coincide iff φ(2^(n-1), q) = v",
                (b, q),
                int(phi[half - 1, q - 1] == corner),
                int(coincide),
            )

    if kernel and table.n > 0:
        penultimate = np.stack([c.as_matrix()[size - 2] for c in kernel])
        rank = ColumnEchelon(len(kernel), _rows_of(penultimate.T)).rank
        report.record("a cocycle is determined by row 2^n - 1", (table.n,), len(kernel), rank)

    return report


def check_three_cocycle_lemmas(table: LaverTable) -> CheckReport:
    """Structural facts every 3-cocycle satisfies, over the computed kernel basis."""
    size = table.size
    report = CheckReport("3-cocycle lemmas")
    if table.n == 0:
        return report

    kernel = kernel_cochains(table, 3)
    penultimate = size - 1
    for b, cocycle in enumerate(kernel, start=1):
        phi = cocycle.as_array()
        corner = phi[:, -1, -1]
        report.record("φ(x, 2^n, 2^n) constant", (b,), 1, int(np.all(corner == corner[0])))
        last = phi[penultimate - 1, penultimate - 1]
        report.record("φ(2^n - 1, 2^n - 1, z) constant", (b,), 1, int(np.all(last == last[0])))

    if kernel:
        first = np.stack([c.as_array()[penultimate - 1].ravel() for c in kernel])
        rank = ColumnEchelon(len(kernel), _rows_of(first.T)).rank
        report.record("a cocycle is determined by x = 2^n - 1", (table.n,), len(kernel), rank)

    return report


def _rows_of(matrix: np.ndarray) -> list[dict[int, int]]:
    return [{int(j): int(row[j]) for j in np.flatnonzero(row)} for row in matrix]


def first_column_rank(table: LaverTable) -> int:
    """Rank of the first columns ψ_q(·, 1) for q < 2^n."""
    columns = np.stack([psi2(table, q).as_matrix()[:, 0] for q in range(1, table.size)], axis=1)

    return ColumnEchelon(table.size - 1, _rows_of(columns)).rank


def zero_one_obstruction(table: LaverTable, basis: list[Cochain] | None = None) -> CheckReport:
    """Every basis of Z^3(A_1) has a member taking a value outside {0, 1}.

    Writing the members in terms of φ_(2,1), -φ_(2,2) - φ_(2,1) and const,
    the value at (1, 2, 1) minus the value at (2, 1, 1) is twice the φ_(2,1)
    coordinate, and some member has a nonzero coordinate there.
    """
    if table.n != 1:
        msg = f"The {{0, 1}} obstruction is stated on A_1, got A_{table.n}"
        raise DomainError(msg)

    members = basis if basis is not None else kernel_cochains(table, 3)
    base = phi3(table, 2, 1)
    explicit = (base, -phi3(table, 2, 2) - base, const_cochain(1, 3))
    in_explicit = _family_echelon(explicit)

    report = CheckReport("zero-one obstruction")
    witness = None
    for i, member in enumerate(members, start=1):
        coordinates = in_explicit.solve(member.values.tolist())
        report.record("member lies in the span", (i,), 1, int(coordinates is not None))
        if coordinates is None:
            continue
        lam = coordinates[0]
        gap = member(1, 2, 1) - member(2, 1, 1)
        report.record("ζ(1,2,1) - ζ(2,1,1) = 2λ", (i,), 2 * lam, gap)
        values = {member(1, 2, 1), member(2, 1, 1)}
        if lam and witness is None and not values <= {0, 1}:
            witness = i

    found = int(witness is not None)
    report.record("member with a value outside {0, 1}", (len(members),), 1, found)
    if witness is not None:
        logger.debug("Basis member {} of Z^3(A_1) leaves {{0, 1}}", witness)

    return report


def check_cocycle_spaces(table: LaverTable) -> CheckReport:
    """Ranks, bases and cohomology in every degree the caps allow."""
    report = CheckReport("cocycle spaces")

    spaces = [
        cocycle_space(table, 2, Family.PHI),
        cocycle_space(table, 2, Family.PSI),
        cocycle_space(table, 3),
        cocycle_space(table, 3, prime=True),
    ]
    for space in spaces:
        report.record(space.summary(), (table.n, space.k), 1, int(space.passed))

    for k in (1, 2, 3):
        group = cohomology(table, k)
        report.record(f"H^{k} = Z", (table.n, k), 1, int(group == QuotientGroup(1)))

    report.record("B^2 rank", (table.n,), table.size - 1, coboundary_rank(table, 2))
    report.record("B^3 rank", (table.n,), table.size**2 - table.size, coboundary_rank(table, 3))

    return merge_reports(
        "cocycle spaces",
        [report, check_two_cocycle_lemmas(table), check_three_cocycle_lemmas(table)],
    )
