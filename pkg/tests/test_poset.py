import networkx as nx
import numpy as np
import pytest

from laver_tables.tables.exceptions import DomainError, SizeLimitExceeded
from laver_tables.tables.laver import build_table
from laver_tables.tables.poset import (
    basis_change_matrix,
    before,
    check_beforesym,
    check_occurrence,
    check_order_axioms,
    check_structure,
    column_matrix,
    column_set,
    divides,
    divisibility_poset,
    glb,
    hasse,
    is_lattice,
    lub,
    occurrence_constraints,
)

HASSE = {
    0: [],
    1: [(1, 2)],
    2: [(1, 3), (3, 2), (2, 4)],
    3: [(1, 5), (5, 3), (5, 2), (3, 7), (7, 6), (2, 6), (6, 4), (4, 8)],
    4: [
        (1, 9),
        (9, 5),
        (5, 13),
        (13, 3),
        (13, 2),
        (13, 4),
        (4, 12),
        (3, 11),
        (11, 7),
        (7, 15),
        (15, 14),
        (2, 10),
        (10, 6),
        (6, 14),
        (14, 12),
        (12, 8),
        (8, 16),
    ],
}

A3_COLUMNS = {
    1: {1, 2, 3, 4, 5, 6, 7, 8},
    2: {2, 4, 6, 8},
    3: {3, 4, 6, 7, 8},
    4: {4, 8},
    5: {2, 3, 4, 5, 6, 7, 8},
    6: {4, 6, 8},
    7: {4, 6, 7, 8},
    8: {8},
}

OCCURRENCES = {
    1: (1, {1}),
    2: (2, {1, 2, 3}),
    3: (2, {1}),
    4: (3, {1, 2, 3, 4, 5, 6, 7}),
    5: (3, {1, 3, 5}),
    6: (3, {1, 2, 5}),
    7: (3, {1}),
    8: (4, set(range(1, 16))),
}


@pytest.mark.parametrize(("q", "expected"), A3_COLUMNS.items())
def test_column_set_a3(a3, q, expected):
    assert column_set(a3, q) == expected


def test_column_set_examples(tables):
    assert column_set(tables[2], 3) == {2, 3, 4}
    for n in range(5):
        assert column_set(tables[n], tables[n].size) == {tables[n].size}


def test_column_set_out_of_range(a3):
    with pytest.raises(DomainError):
        column_set(a3, 9)


def test_divides(a3, tables):
    assert divides(a3, 5, 2)
    assert not divides(a3, 2, 3)
    assert not divides(a3, 3, 2)
    for n in range(5):
        assert all(divides(tables[n], 1, p) for p in range(1, tables[n].size + 1))


@pytest.mark.parametrize("n", range(7))
def test_divides_is_column_inclusion(tables, n):
    relation = column_matrix(tables[n])
    # r ∈ Col(q) ⇔ Col(r) ⊆ Col(q)
    contains = np.all(relation[:, None, :] >= relation[None, :, :], axis=2)

    assert np.array_equal(relation, contains)


@pytest.mark.parametrize(("n", "edges"), HASSE.items())
def test_hasse(tables, n, edges):
    poset = hasse(tables[n])

    assert poset.covers == sorted(edges)
    assert sorted(poset.graph.edges) == sorted(edges)


@pytest.mark.parametrize("n", range(7))
def test_hasse_closure_is_order(tables, n):
    poset = divisibility_poset(tables[n])
    closure = nx.transitive_closure_dag(poset.graph)
    strict = poset.relation & ~np.eye(poset.size, dtype=np.bool_)
    expected = {(int(a) + 1, int(b) + 1) for a, b in np.argwhere(strict)}

    assert set(closure.edges) == expected


def test_lub_glb(a3):
    assert lub(a3, 2, 3) == 6
    assert glb(a3, 2, 3) == 5
    assert lub(a3, 4, 4) == 4
    assert lub(a3, 1, 8) == 8
    assert glb(a3, 1, 8) == 1


def test_no_lub_a5():
    table = build_table(5)

    assert lub(table, 18, 19) is None

    lattice, witness = is_lattice(table)

    assert not lattice
    a, b = witness
    assert lub(table, a, b) is None or glb(table, a, b) is None


@pytest.mark.parametrize("n", range(5))
def test_is_lattice(tables, n):
    assert is_lattice(tables[n]) == (True, None)


@pytest.mark.parametrize("n", range(1, 5))
def test_basis_change_unitriangular(tables, n):
    poset = divisibility_poset(tables[n])
    order = [p - 1 for p in poset.linear_extension()]
    matrix = basis_change_matrix(tables[n])[np.ix_(order, order)]

    assert np.array_equal(np.diagonal(matrix), np.ones(tables[n].size, dtype=np.int64))
    assert not np.any(np.tril(matrix, k=-1))


def test_linear_extension_ends(a4):
    order = divisibility_poset(a4).linear_extension()

    assert order[0] == 1
    assert order[-3:] == [12, 8, 16]


@pytest.mark.parametrize("n", range(7))
def test_order_axioms(tables, n):
    report = check_order_axioms(tables[n])

    assert report.passed, report.failures


@pytest.mark.parametrize("n", range(7))
def test_structure(tables, n):
    report = check_structure(tables[n])

    assert report.passed, report.failures


def test_top_chain_a3(a3):
    poset = divisibility_poset(a3)

    assert (6, 4) in poset.covers
    assert (4, 8) in poset.covers


@pytest.mark.parametrize(("r", "expected"), OCCURRENCES.items())
def test_occurrence_constraints(r, expected):
    assert occurrence_constraints(6, r) == (expected[0], frozenset(expected[1]))


@pytest.mark.parametrize("r", range(9))
def test_check_occurrence(r):
    report = check_occurrence(6, r)

    assert report.passed, report.failures
    assert report.total > 0


@pytest.mark.parametrize("r", range(1, 9))
def test_occurrence_constraints_any_base(r):
    smallest, residues = occurrence_constraints(6, r)
    for m in range(smallest, 7):
        expected = {q for q in range(1, (1 << m) + 1) if (q - 1) % (1 << smallest) + 1 in residues}

        assert occurrence_constraints(6, r, m) == (m, frozenset(expected))


@pytest.mark.parametrize(
    ("r", "m", "expected"),
    [(1, 3, {1, 3, 5, 7}), (3, 3, {1, 5}), (3, 4, {1, 5, 9, 13})],
)
def test_occurrence_constraints_larger_base(r, m, expected):
    assert occurrence_constraints(6, r, m) == (m, frozenset(expected))


def test_occurrence_out_of_range():
    with pytest.raises(DomainError):
        occurrence_constraints(2, 4)

    with pytest.raises(DomainError):
        occurrence_constraints(6, 4, 2)


@pytest.mark.parametrize(
    ("n", "x", "y", "expected"),
    [(2, 1, 2, True), (2, 2, 1, False), (3, 3, 4, True), (3, 4, 3, False), (3, 8, 5, True)],
)
def test_before_is_one_way(tables, n, x, y, expected):
    assert before(tables[n], x, y) is expected


@pytest.mark.parametrize("n", range(5))
def test_beforesym(tables, n):
    report = check_beforesym(tables[n])

    assert report.passed
    assert report.total == (0 if n == 0 else 3)


def test_poset_refused_above_cap():
    with pytest.raises(SizeLimitExceeded):
        column_matrix(build_table(11))
