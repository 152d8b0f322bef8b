"""Exact integer linear algebra.

Entries are Python integers held in numpy object arrays, so intermediate
growth during elimination never overflows.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.constants import MATRIX_ELEMENT_BUDGET
from laver_tables.tables.exceptions import ContractError, SizeLimitExceeded

ObjArray = npt.NDArray[np.object_]
SparseRow = Mapping[int, int]


def _identity(size: int) -> ObjArray:
    eye = np.zeros((size, size), dtype=object)
    for i in range(size):
        eye[i, i] = 1

    return eye


@dataclass(frozen=True, eq=False)
class IntegerMatrix:
    """Dense matrix of arbitrary-precision integers."""

    entries: ObjArray

    def __post_init__(self) -> None:
        if self.entries.ndim != 2:  # noqa: PLR2004
            msg = f"IntegerMatrix needs a 2-D array, got {self.entries.ndim} dimensions"
            raise ContractError(msg)
        if self.entries.size > MATRIX_ELEMENT_BUDGET:
            msg = (
                f"Matrix of shape {self.entries.shape} exceeds the budget of "
                f"{MATRIX_ELEMENT_BUDGET} entries"
            )
            raise SizeLimitExceeded(msg)
        if self.entries.dtype != object:
            converted = np.asarray(self.entries, dtype=np.int64).astype(object)
            object.__setattr__(self, "entries", converted)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: int | None = None) -> IntegerMatrix:
        listed = [[int(v) for v in row] for row in rows]
        width = cols if cols is not None else (len(listed[0]) if listed else 0)
        if any(len(row) != width for row in listed):
            msg = "Rows of an IntegerMatrix must have equal length"
            raise ContractError(msg)
        entries = np.zeros((len(listed), width), dtype=object)
        for i, row in enumerate(listed):
            entries[i, :] = row

        return cls(entries)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], rows: int) -> IntegerMatrix:
        return cls.from_rows(columns, rows).transpose()

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntegerMatrix:
        return cls(np.zeros((rows, cols), dtype=object))

    @classmethod
    def identity(cls, size: int) -> IntegerMatrix:
        return cls(_identity(size))

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.entries.shape
        return rows, cols

    @property
    def rows(self) -> int:
        return self.shape[0]

    @property
    def cols(self) -> int:
        return self.shape[1]

    def transpose(self) -> IntegerMatrix:
        return IntegerMatrix(self.entries.T.copy())

    def column(self, j: int) -> list[int]:
        return [int(v) for v in self.entries[:, j]]

    def columns(self) -> list[list[int]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.entries]

    def sparse_rows(self) -> list[dict[int, int]]:
        return [
            {int(j): int(row[j]) for j in np.flatnonzero(row)} for row in self.entries
        ]

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def __matmul__(self, other: IntegerMatrix) -> IntegerMatrix:
        if self.cols != other.rows:
            msg = f"Cannot multiply {self.shape} by {other.shape}"
            raise ContractError(msg)

        product = np.zeros((self.rows, other.cols), dtype=object)
        for i, row in enumerate(self.entries):
            support = np.flatnonzero(row)
            if support.size:
                product[i, :] = row[support] @ other.entries[support]

        return IntegerMatrix(product)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntegerMatrix):
            return NotImplemented

        return self.shape == other.shape and bool(np.all(self.entries == other.entries))


class ColumnEchelon:
    """Column echelon form H = M V with V unimodular.

    Rows of M are consumed one at a time and only V is kept, so M may be
    streamed from sparse rows without ever being dense. The columns of V
    past the rank span the integer kernel of M, and since V is unimodular
    that basis is saturated.
    """

    def __init__(self, cols: int, rows: Iterable[SparseRow] = ()) -> None:
        self.cols = cols
        self.rank = 0
        # Row j of _basis is column j of V
        self._basis = _identity(cols)
        # (row index of M, H[row, 0..t]) for every pivot t
        self._pivots: list[tuple[int, list[int]]] = []
        self._rows: list[dict[int, int]] = []

        for row in rows:
            self.push(row)

    @classmethod
    def from_matrix(cls, matrix: IntegerMatrix) -> ColumnEchelon:
        return cls(matrix.cols, matrix.sparse_rows())

    def push(self, row: SparseRow) -> None:
        """Append one row of M and reduce the active columns against it."""
        entries = {int(i): int(v) for i, v in row.items() if v}
        if any(not 0 <= i < self.cols for i in entries):
            msg = f"Row index outside 0..{self.cols - 1}"
            raise ContractError(msg)

        index = len(self._rows)
        self._rows.append(entries)
        if self.rank == self.cols or not entries:
            return

        start = self.rank
        active = self._image(entries, start, self.cols)
        while True:
            support = np.flatnonzero(active)
            if support.size == 0:
                return
            if support.size == 1:
                break
            pivot = min(support, key=lambda j: abs(active[j]))
            for j in support:
                if j != pivot:
                    factor = active[j] // active[pivot]
                    active[j] -= factor * active[pivot]
                    self._basis[start + j] -= factor * self._basis[start + pivot]

        lead = int(support[0])
        if lead:
            self._basis[[start, start + lead]] = self._basis[[start + lead, start]]
            active[0], active[lead] = active[lead], active[0]
        if active[0] < 0:
            self._basis[start] = -self._basis[start]

        self._pivots.append((index, list(self._image(entries, 0, start + 1))))
        self.rank += 1

    def _image(self, entries: dict[int, int], start: int, stop: int) -> ObjArray:
        image = np.zeros(stop - start, dtype=object)
        for i, coefficient in entries.items():
            image += coefficient * self._basis[start:stop, i]

        return image

    @property
    def transform(self) -> IntegerMatrix:
        """The unimodular matrix V."""
        return IntegerMatrix(self._basis.T.copy())

    @property
    def nullity(self) -> int:
        return self.cols - self.rank

    def kernel_vectors(self) -> list[list[int]]:
        return [[int(v) for v in self._basis[j]] for j in range(self.rank, self.cols)]

    def kernel_matrix(self) -> IntegerMatrix:
        """Kernel basis as the columns of a cols x nullity matrix."""
        return IntegerMatrix(self._basis[self.rank :].T.copy())

    def solve(self, target: Sequence[int]) -> list[int] | None:
        """Integer x with M x = target, or None when there is none."""
        if len(target) != len(self._rows):
            msg = f"Right-hand side has length {len(target)}, expected {len(self._rows)}"
            raise ContractError(msg)

        coordinates: list[int] = []
        for t, (index, prefix) in enumerate(self._pivots):
            residual = int(target[index]) - sum(prefix[s] * coordinates[s] for s in range(t))
            if residual % prefix[t]:
                return None
            coordinates.append(residual // prefix[t])

        solution = np.zeros(self.cols, dtype=object)
        for t, value in enumerate(coordinates):
            if value:
                solution += value * self._basis[t]

        for index, entries in enumerate(self._rows):
            if sum(v * solution[i] for i, v in entries.items()) != target[index]:
                return None

        return [int(v) for v in solution]


@dataclass(frozen=True)
class SmithForm:
    """D = U M V with D diagonal, each entry dividing the next."""

    diagonal: IntegerMatrix
    left: IntegerMatrix
    right: IntegerMatrix

    @property
    def invariants(self) -> list[int]:
        """Nonzero diagonal entries."""
        size = min(self.diagonal.shape)
        diagonal = self.diagonal.entries
        return [int(diagonal[i, i]) for i in range(size) if diagonal[i, i]]


def _move_smallest_to_pivot(d: ObjArray, left: ObjArray, right: ObjArray, t: int) -> None:
    rows, cols = d.shape
    candidates = [(abs(d[i, t]), i, t) for i in range(t, rows) if d[i, t]]
    candidates += [(abs(d[t, j]), t, j) for j in range(t + 1, cols) if d[t, j]]
    _, i, j = min(candidates)
    if i != t:
        d[[t, i]] = d[[i, t]]
        left[[t, i]] = left[[i, t]]
    if j != t:
        d[:, [t, j]] = d[:, [j, t]]
        right[:, [t, j]] = right[:, [j, t]]


def smith_normal_form(matrix: IntegerMatrix) -> SmithForm:
    """Smith normal form with recorded unimodular transforms."""
    d = matrix.entries.copy()
    rows, cols = d.shape
    left, right = _identity(rows), _identity(cols)

    for t in range(min(rows, cols)):
        if not np.any(d[t:, t:]):
            break

        i, j = min(np.argwhere(d[t:, t:] != 0), key=lambda ij: abs(d[t + ij[0], t + ij[1]]))
        if i:
            d[[t, t + i]] = d[[t + i, t]]
            left[[t, t + i]] = left[[t + i, t]]
        if j:
            d[:, [t, t + j]] = d[:, [t + j, t]]
            right[:, [t, t + j]] = right[:, [t + j, t]]

        while True:
            _move_smallest_to_pivot(d, left, right, t)
            remainder = False
            for i in range(t + 1, rows):
                if d[i, t]:
                    factor = d[i, t] // d[t, t]
                    d[i] -= factor * d[t]
                    left[i] -= factor * left[t]
                    remainder = remainder or d[i, t] != 0
            for j in range(t + 1, cols):
                if d[t, j]:
                    factor = d[t, j] // d[t, t]
                    d[:, j] -= factor * d[:, t]
                    right[:, j] -= factor * right[:, t]
                    remainder = remainder or d[t, j] != 0
            if remainder:
                continue

            pivot = d[t, t]
            fault = next((i for i in range(t + 1, rows) if np.any(d[i, t + 1 :] % pivot)), None)
            if fault is None:
                break
            d[t] += d[fault]
            left[t] += left[fault]

        if d[t, t] < 0:
            d[t] = -d[t]
            left[t] = -left[t]

    return SmithForm(IntegerMatrix(d), IntegerMatrix(left), IntegerMatrix(right))


def rank(matrix: IntegerMatrix) -> int:
    return ColumnEchelon.from_matrix(matrix).rank


def kernel_basis(matrix: IntegerMatrix) -> IntegerMatrix:
    """Saturated basis of {x : M x = 0} as matrix columns."""
    return ColumnEchelon.from_matrix(matrix).kernel_matrix()


def solve_in_lattice(matrix: IntegerMatrix, target: Sequence[int]) -> list[int] | None:
    """Integer solution of M x = target, or None."""
    return ColumnEchelon.from_matrix(matrix).solve(target)


def determinant(matrix: IntegerMatrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    size, cols = matrix.shape
    if size != cols:
        msg = f"Determinant of a non-square {matrix.shape} matrix"
        raise ContractError(msg)
    if size == 0:
        return 1

    a = matrix.entries.copy()
    sign, previous = 1, 1
    for k in range(size - 1):
        if a[k, k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i, k]), None)
            if swap is None:
                return 0
            a[[k, swap]] = a[[swap, k]]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i, j] = (a[i, j] * a[k, k] - a[i, k] * a[k, j]) // previous
        previous = a[k, k]

    return sign * int(a[size - 1, size - 1])


def is_unimodular(matrix: IntegerMatrix) -> bool:
    return matrix.rows == matrix.cols and abs(determinant(matrix)) == 1


@dataclass(frozen=True)
class QuotientGroup:
    """Finitely generated abelian group Z^free_rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_s."""

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)

        return " ⊕ ".join(parts) if parts else "0"


def quotient_of_kernel(
    kernel_of: ColumnEchelon,
    image_columns: Iterable[Sequence[int]],
) -> QuotientGroup:
    """ker(B) / im(A) given the echelon form of B and the columns of A."""
    kernel = kernel_of.kernel_matrix()
    in_kernel = ColumnEchelon.from_matrix(kernel)

    coordinates = []
    for column in image_columns:
        solution = in_kernel.solve(column)
        if solution is None:
            msg = "Image column does not lie in the kernel, B·A ≠ 0"
            raise ContractError(msg)
        coordinates.append(solution)

    if not coordinates or kernel.cols == 0:
        return QuotientGroup(kernel.cols)

    smith = smith_normal_form(IntegerMatrix.from_columns(coordinates, kernel.cols))
    invariants = smith.invariants
    logger.debug("Quotient: kernel rank {}, image invariants {}", kernel.cols, invariants)

    return QuotientGroup(kernel.cols - len(invariants), tuple(d for d in invariants if d > 1))


def quotient_group(a: IntegerMatrix, b: IntegerMatrix) -> QuotientGroup:
    """ker(B) / im(A), requiring B A = 0."""
    if b.cols != a.rows:
        msg = f"Incompatible shapes {b.shape} and {a.shape}"
        raise ContractError(msg)
    if not (b @ a).is_zero():
        msg = "B·A ≠ 0, the image is not contained in the kernel"
        raise ContractError(msg)

    return quotient_of_kernel(ColumnEchelon.from_matrix(b), a.columns())
