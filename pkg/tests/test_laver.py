import numpy as np
import pytest

from laver_tables.tables.exceptions import DomainError, SizeLimitExceeded, TableFormatError
from laver_tables.tables.laver import (
    LaverTable,
    build_table,
    expand_table,
    naive_table,
    project,
)

A3_ROWS = {
    1: [2, 4, 6, 8],
    2: [3, 4, 7, 8],
    3: [4, 8],
    4: [5, 6, 7, 8],
    5: [6, 8],
    6: [7, 8],
    7: [8],
    8: [1, 2, 3, 4, 5, 6, 7, 8],
}

A4_ROWS = {
    1: [2, 12, 14, 16],
    2: [3, 12, 15, 16],
    3: [4, 8, 12, 16],
    4: [5, 6, 7, 8, 13, 14, 15, 16],
    5: [6, 8, 14, 16],
    6: [7, 8, 15, 16],
    7: [8, 16],
    8: [9, 10, 11, 12, 13, 14, 15, 16],
    9: [10, 12, 14, 16],
    10: [11, 12, 15, 16],
    11: [12, 16],
    12: [13, 14, 15, 16],
    13: [14, 16],
    14: [15, 16],
    15: [16],
    16: list(range(1, 17)),
}

COMPOSITION_2 = [
    [3, 1, 3, 1],
    [3, 2, 3, 2],
    [3, 3, 3, 3],
    [1, 2, 3, 4],
]

COMPOSITION_3 = [
    [3, 5, 7, 1, 3, 5, 7, 1],
    [3, 6, 7, 2, 3, 6, 7, 2],
    [7, 3, 7, 3, 7, 3, 7, 3],
    [5, 6, 7, 4, 5, 6, 7, 4],
    [7, 5, 7, 5, 7, 5, 7, 5],
    [7, 6, 7, 6, 7, 6, 7, 6],
    [7, 7, 7, 7, 7, 7, 7, 7],
    [1, 2, 3, 4, 5, 6, 7, 8],
]


def test_small_tables(tables):
    assert [row.tolist() for row in tables[0].rows] == [[1]]
    assert [row.tolist() for row in tables[1].rows] == [[2], [1, 2]]
    assert [row.tolist() for row in tables[2].rows] == [[2, 4], [3, 4], [4], [1, 2, 3, 4]]


@pytest.mark.parametrize(("p", "row"), A3_ROWS.items())
def test_table_rows(a3, p, row):
    assert a3.row(p).tolist() == row
    assert a3.period(p) == len(row)


def test_a4_rows(a4):
    assert {p: row.tolist() for p, row in enumerate(a4.rows, start=1)} == A4_ROWS


@pytest.mark.parametrize("n", range(1, 9))
def test_thresholds_match_previous_table(n):
    table, previous = build_table(n), build_table(n - 1)
    for p in range(1, table.half + 1):
        same = table.left_translation(p)[: previous.size] == previous.left_translation(p)
        shared = int(np.argmin(same)) if not same.all() else previous.size

        assert table.threshold(p) == shared


@pytest.mark.parametrize(
    ("p", "q", "expected"),
    [(1, 3, 6), (1, 1, 2), (2, 5, 3), (7, 3, 8), (8, 5, 5)],
)
def test_apply(a3, p, q, expected):
    assert a3.apply(p, q) == expected


def test_apply_out_of_range(a3):
    with pytest.raises(DomainError):
        a3.apply(9, 1)

    with pytest.raises(DomainError):
        a3.apply(1, 0)

    with pytest.raises(DomainError):
        a3.apply_many([1, 9], [1, 1])


@pytest.mark.parametrize("n", range(7))
def test_dense_matches_naive(tables, n):
    assert np.array_equal(tables[n].dense, naive_table(n))


def test_left_translation(tables, a2, a4):
    assert a2.left_translation(3).tolist() == [4, 4, 4, 4]
    assert tables[1].left_translation(2).tolist() == [1, 2]
    assert a4.left_translation(16).tolist() == list(range(1, 17))
    assert np.array_equal(a4.left_translation(1), a4.dense[0])


@pytest.mark.parametrize(("n", "p", "expected"), [(2, 1, 1), (3, 1, 2), (4, 1, 1)])
def test_threshold(tables, n, p, expected):
    assert tables[n].threshold(p) == expected


def test_threshold_undefined(tables):
    with pytest.raises(DomainError):
        tables[0].threshold(1)

    with pytest.raises(DomainError):
        tables[3].threshold(5)


@pytest.mark.parametrize(("n", "expected"), [(2, COMPOSITION_2), (3, COMPOSITION_3)])
def test_composition_table(tables, n, expected):
    assert tables[n].composition_table().tolist() == expected


def test_compose_examples(tables):
    assert tables[0].compose(1, 1) == 1
    assert tables[1].compose(1, 1) == 1
    assert tables[1].compose(2, 2) == 2
    assert tables[3].compose(3, 2) == 3


@pytest.mark.parametrize("n", range(1, 7))
def test_expand_table(tables, n):
    assert expand_table(tables[n - 1], tables[n].thresholds) == tables[n]


def test_expand_table_bad_thresholds(tables):
    with pytest.raises(DomainError):
        expand_table(tables[2], [1, 1])

    with pytest.raises(DomainError):
        expand_table(tables[2], [9, 0, 0, 0])


@pytest.mark.parametrize(
    ("n", "m", "p", "expected"),
    [(3, 2, 7, 3), (3, 2, 8, 4), (4, 1, 9, 1), (3, 0, 5, 1)],
)
def test_project(n, m, p, expected):
    assert project(n, m, p) == expected


def test_project_homomorphism(tables):
    big, small = tables[5], tables[3]
    p = np.arange(1, big.size + 1)
    reduced = (p - 1) % small.size + 1

    assert np.array_equal(
        (big.dense - 1) % small.size + 1,
        small.dense[np.ix_(reduced - 1, reduced - 1)],
    )


def test_build_table_caps():
    with pytest.raises(SizeLimitExceeded):
        build_table(5, max_n=4)

    with pytest.raises(DomainError):
        build_table(-1)


def test_build_table_is_cached():
    assert build_table(5) is build_table(5)


def test_dense_refused_above_cap():
    with pytest.raises(SizeLimitExceeded):
        _ = build_table(13).dense


def test_large_table_lookups():
    table = build_table(16)

    assert table.apply(table.size - 1, 12345) == table.size
    assert table.apply(table.size, 777) == 777
    assert table.apply(1, 1) == 2
    assert table.period(table.size) == table.size


@pytest.mark.parametrize(
    "rows",
    [
        [[2], [1, 2], [1]],
        [[2, 2], [1, 2]],
        [[1], [1, 2]],
        [[2], [1, 2, 3]],
    ],
)
def test_from_rows_rejects(rows):
    with pytest.raises(TableFormatError):
        LaverTable.from_rows(1, rows)


def test_from_rows_round_trip(a3):
    assert LaverTable.from_rows(3, [row.tolist() for row in a3.rows]) == a3
