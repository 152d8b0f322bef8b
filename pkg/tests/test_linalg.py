import numpy as np
import pytest
import sympy

from laver_tables.cohomology.linalg import (
    ColumnEchelon,
    IntegerMatrix,
    QuotientGroup,
    determinant,
    is_unimodular,
    kernel_basis,
    quotient_group,
    rank,
    smith_normal_form,
    solve_in_lattice,
)
from laver_tables.tables.exceptions import ContractError, SizeLimitExceeded

M = IntegerMatrix.from_rows([[1, 2, 3], [4, 5, 6]])


def _random_matrices(count, rows, cols, seed=11):
    rng = np.random.default_rng(seed)
    return [rng.integers(-5, 6, size=(rows, cols)).tolist() for _ in range(count)]


@pytest.mark.parametrize(
    ("rows", "invariants"),
    [
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], [2, 6, 12]),
        ([[1, 2], [3, 4]], [1, 2]),
        ([[2, 0], [0, 3]], [1, 6]),
        ([[6, 4], [4, 6]], [2, 10]),
        ([[0, 0], [0, 0]], []),
        ([[1, 2, 3], [4, 5, 6]], [1, 3]),
    ],
)
def test_smith_invariants(rows, invariants):
    assert smith_normal_form(IntegerMatrix.from_rows(rows)).invariants == invariants


@pytest.mark.parametrize("rows", _random_matrices(6, 4, 5))
def test_smith_transforms(rows):
    matrix = IntegerMatrix.from_rows(rows)
    smith = smith_normal_form(matrix)
    diagonal = smith.diagonal.entries

    assert smith.left @ matrix @ smith.right == smith.diagonal
    assert is_unimodular(smith.left)
    assert is_unimodular(smith.right)
    assert all(diagonal[i, j] == 0 for i, j in np.ndindex(diagonal.shape) if i != j)

    invariants = smith.invariants
    assert all(d > 0 for d in invariants)
    assert all(b % a == 0 for a, b in zip(invariants, invariants[1:], strict=False))
    assert len(invariants) == sympy.Matrix(rows).rank()


@pytest.mark.parametrize("rows", _random_matrices(6, 5, 5, seed=5))
def test_determinant(rows):
    assert determinant(IntegerMatrix.from_rows(rows)) == sympy.Matrix(rows).det()


@pytest.mark.parametrize("rows", _random_matrices(4, 6, 4, seed=2) + [[[1, 2], [2, 4]]])
def test_rank(rows):
    assert rank(IntegerMatrix.from_rows(rows)) == sympy.Matrix(rows).rank()


def test_determinant_not_square():
    with pytest.raises(ContractError):
        determinant(M)


def test_kernel_basis():
    kernel = kernel_basis(M)

    assert kernel.shape == (3, 1)
    assert (M @ kernel).is_zero()
    assert kernel.column(0) in ([1, -2, 1], [-1, 2, -1])


def test_kernel_is_saturated():
    # ker [2 4] is spanned by (2, -1), not by a multiple of it
    kernel = kernel_basis(IntegerMatrix.from_rows([[2, 4]]))

    assert kernel.column(0) in ([2, -1], [-2, 1])


@pytest.mark.parametrize(("target", "solvable"), [([6, 15], True), ([1, 1], True), ([1, 2], False)])
def test_solve_in_lattice(target, solvable):
    solution = solve_in_lattice(M, target)

    if not solvable:
        assert solution is None
        return

    assert solution is not None
    assert (M @ IntegerMatrix.from_columns([solution], 3)).column(0) == target


def test_solve_needs_integer_solution():
    doubled = IntegerMatrix.from_rows([[2]])

    assert solve_in_lattice(doubled, [3]) is None
    assert solve_in_lattice(doubled, [4]) == [2]


def test_streamed_echelon_matches_matrix():
    streamed = ColumnEchelon(3)
    for row in M.sparse_rows():
        streamed.push(row)

    assert streamed.rank == 2
    assert streamed.nullity == 1
    assert is_unimodular(streamed.transform)
    assert streamed.kernel_vectors() == ColumnEchelon.from_matrix(M).kernel_vectors()


def test_echelon_rejects_bad_rows():
    with pytest.raises(ContractError):
        ColumnEchelon(2, [{5: 1}])

    with pytest.raises(ContractError):
        ColumnEchelon.from_matrix(M).solve([1])


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [
        ([[2]], [[0]], QuotientGroup(0, (2,))),
        ([[1], [1]], [[1, -1]], QuotientGroup(0)),
        ([[0], [0]], [[0, 0]], QuotientGroup(2)),
        ([[2, 0], [0, 3], [0, 0]], [[0, 0, 0]], QuotientGroup(1, (6,))),
    ],
)
def test_quotient_group(a, b, expected):
    assert quotient_group(IntegerMatrix.from_rows(a), IntegerMatrix.from_rows(b)) == expected


def test_quotient_group_requires_complex():
    with pytest.raises(ContractError):
        quotient_group(IntegerMatrix.from_rows([[1]]), IntegerMatrix.from_rows([[1]]))


@pytest.mark.parametrize(
    ("group", "text"),
    [
        (QuotientGroup(1), "Z"),
        (QuotientGroup(3), "Z^3"),
        (QuotientGroup(0, (2,)), "Z/2"),
        (QuotientGroup(0), "0"),
    ],
)
def test_quotient_group_str(group, text):
    assert str(group) == text


def test_big_integers():
    big = 10**30
    matrix = IntegerMatrix.from_rows([[big, 1], [0, big]])

    assert determinant(matrix) == big**2
    assert smith_normal_form(matrix).invariants == [1, big**2]


def test_matrix_budget():
    with pytest.raises(SizeLimitExceeded):
        IntegerMatrix.zeros(3000, 1500)
