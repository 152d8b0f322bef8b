import pytest

from laver_tables.cohomology.cochain import Cochain, differential
from laver_tables.cohomology.cocycles import Family, basis3, const_cochain, phi2, psi2
from laver_tables.cohomology.linalg import QuotientGroup
from laver_tables.cohomology.spaces import (
    check_cocycle_spaces,
    check_three_cocycle_lemmas,
    check_two_cocycle_lemmas,
    coboundary_rank,
    cocycle_rank,
    cocycle_space,
    cohomology,
    expected_cocycle_rank,
    first_column_rank,
    is_coboundary,
    kernel_cochains,
    zero_one_obstruction,
)
from laver_tables.tables.exceptions import DomainError


@pytest.mark.parametrize(
    ("n", "k", "expected"),
    [(0, 2, 1), (2, 2, 4), (3, 3, 57), (2, 4, 52), (5, 1, 1)],
)
def test_expected_cocycle_rank(n, k, expected):
    assert expected_cocycle_rank(n, k) == expected


def test_expected_rank_unknown():
    assert expected_cocycle_rank(2, 5) is None


@pytest.mark.parametrize("n", range(5))
def test_one_cocycles(tables, n):
    assert cocycle_rank(tables[n], 1) == 1
    assert coboundary_rank(tables[n], 1) == 0


@pytest.mark.parametrize("n", range(5))
def test_two_cocycle_ranks(tables, n):
    table = tables[n]

    assert cocycle_rank(table, 2) == table.size
    assert coboundary_rank(table, 2) == table.size - 1


@pytest.mark.parametrize("n", range(3))
def test_three_cocycle_ranks(tables, n):
    table = tables[n]

    assert cocycle_rank(table, 3) == table.size**2 - table.size + 1
    assert coboundary_rank(table, 3) == table.size**2 - table.size


@pytest.mark.slow
def test_three_cocycle_rank_a3(a3):
    assert cocycle_rank(a3, 3) == 57


@pytest.mark.slow
def test_four_cocycle_rank_a2(a2):
    assert cocycle_rank(a2, 4) == 52


def test_kernel_cochains_are_cocycles(a2):
    kernel = kernel_cochains(a2, 2)

    assert len(kernel) == 4
    for cocycle in kernel:
        assert differential(a2, 2, cocycle).is_zero()


@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("n", range(4))
def test_two_cocycle_basis(tables, n, family):
    report = cocycle_space(tables[n], 2, family)

    assert report.passed, report.summary()


@pytest.mark.parametrize("prime", [False, True])
@pytest.mark.parametrize("n", range(3))
def test_three_cocycle_basis(tables, n, prime):
    report = cocycle_space(tables[n], 3, prime=prime)

    assert report.passed, report.summary()


def test_cocycle_space_degree(a2):
    with pytest.raises(DomainError):
        cocycle_space(a2, 4)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("n", range(3))
def test_cohomology_is_z(tables, n, k):
    assert cohomology(tables[n], k) == QuotientGroup(1)


def test_cohomology_degree(a2):
    with pytest.raises(DomainError):
        cohomology(a2, 0)


@pytest.mark.parametrize("n", range(1, 4))
def test_phi_is_coboundary(tables, n):
    table = tables[n]
    for q in range(1, table.size + 1):
        bounded, witness = is_coboundary(table, phi2(table, q))

        assert bounded
        assert differential(table, 1, witness) == phi2(table, q)


def test_psi_is_coboundary(a3):
    bounded, witness = is_coboundary(a3, psi2(a3, 6))

    assert bounded
    assert differential(a3, 1, witness) == psi2(a3, 6)


@pytest.mark.parametrize("n", range(4))
def test_const_is_not_coboundary(tables, n):
    assert is_coboundary(tables[n], const_cochain(n, 2)) == (False, None)


def test_phi3_is_coboundary(a2):
    cocycle = basis3(a2).members[5]
    bounded, witness = is_coboundary(a2, cocycle)

    assert bounded
    assert differential(a2, 2, witness) == cocycle


def test_low_degree_coboundaries(a2):
    assert is_coboundary(a2, Cochain.zero(2, 1))[0]
    assert is_coboundary(a2, const_cochain(2, 1)) == (False, None)


@pytest.mark.parametrize("n", range(1, 4))
def test_two_cocycle_lemmas(tables, n):
    report = check_two_cocycle_lemmas(tables[n])

    assert report.passed, report.failures


@pytest.mark.parametrize("n", range(1, 3))
def test_three_cocycle_lemmas(tables, n):
    report = check_three_cocycle_lemmas(tables[n])

    assert report.passed, report.failures


def test_zero_one_obstruction(a1):
    assert zero_one_obstruction(a1).passed
    assert zero_one_obstruction(a1, list(basis3(a1).members)).passed


def test_zero_one_obstruction_only_a1(a2):
    with pytest.raises(DomainError):
        zero_one_obstruction(a2)


@pytest.mark.parametrize("n", range(1, 5))
def test_first_column_rank(tables, n):
    assert first_column_rank(tables[n]) == tables[n].size - 1


@pytest.mark.parametrize("n", range(3))
def test_check_cocycle_spaces(tables, n):
    report = check_cocycle_spaces(tables[n])

    assert report.passed, report.failures


@pytest.mark.slow
def test_check_cocycle_spaces_a3(a3):
    report = check_cocycle_spaces(a3)

    assert report.passed, report.failures
