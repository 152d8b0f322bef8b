"""Explicit 2- and 3-cocycle families on A_n and their decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from loguru import logger

from laver_tables.cohomology.cochain import Cochain, combine, find_cocycle_violation
from laver_tables.tables.exceptions import ContractError, DomainError
from laver_tables.tables.laver import LaverTable
from laver_tables.tables.poset import column_matrix
from laver_tables.tables.utils import check_element


class Family(Enum):
    """Explicit bases of the 2-cocycles."""

    PHI = "phi"
    PSI = "psi"

    def __str__(self) -> str:
        match self:
            case self.PHI:
                return "φ_q(x, y) = δ(y, q) - δ(x⊳y, q)"
            case self.PSI:
                return "ψ_q(x, y) = [q ∈ Col(y), q ∉ Col(x⊳y)]"


def const_cochain(n: int, k: int, c: int = 1) -> Cochain:
    return Cochain(n, k, np.full(1 << (k * n), c, dtype=np.int64))


def phi2(table: LaverTable, q: int) -> Cochain:
    """φ_q(x, y) = δ(y, q) - δ(x ⊳ y, q), the coboundary of minus the indicator of q."""
    check_element(q, table.size, "Index")
    columns = np.arange(1, table.size + 1)
    values = (columns[None, :] == q).astype(np.int64) - (table.dense == q)

    return Cochain.from_array(table.n, values)


def gamma(table: LaverTable, q: int) -> Cochain:
    """γ_q(x) = 1 iff x ◁ q."""
    check_element(q, table.size, "Index")

    return Cochain(table.n, 1, column_matrix(table)[:, q - 1])


def psi2(table: LaverTable, q: int, *, cross_check: bool = False) -> Cochain:
    """ψ_q(x, y) = 1 iff q ∈ Col(y) and q ∉ Col(x ⊳ y).

    With ``cross_check`` the closed form is compared against Σ_{r ◁ q} φ_r.
    """
    check_element(q, table.size, "Index")
    member = column_matrix(table)[:, q - 1]
    values = member[None, :] & ~member[table.dense - 1]
    psi = Cochain.from_array(table.n, values.astype(np.int64))

    if cross_check:
        below = np.flatnonzero(member) + 1
        expected = combine(((1, phi2(table, int(r))) for r in below), table.n, 2)
        if psi != expected:
            msg = f"ψ_{q} on A_{table.n} disagrees with the sum of φ_r over r ◁ {q}"
            raise ContractError(msg)

    return psi


def const_prime(table: LaverTable) -> Cochain:
    """const' = const - Σ_{q < 2^n} φ_q, zero on row 2^n - 1 except in the last column."""
    terms = [(-1, phi2(table, q)) for q in range(1, table.size)]

    return const_cochain(table.n, 2) + combine(terms, table.n, 2)


def theta(table: LaverTable) -> Cochain:
    """θ = Σ_{r <= 2^(n-1)} φ_r, which encodes the thresholds."""
    if table.n < 1:
        msg = "θ needs n >= 1"
        raise DomainError(msg)
    half = table.half
    columns = np.arange(1, table.size + 1)
    values = (columns[None, :] <= half).astype(np.int64) - (table.dense <= half)

    return Cochain.from_array(table.n, values)


def _require_cocycle(table: LaverTable, cochain: Cochain) -> None:
    violation = find_cocycle_violation(table, cochain)
    if violation is not None:
        msg = f"Not a {cochain.arity}-cocycle, δφ{violation} ≠ 0"
        raise ContractError(msg)


@dataclass(frozen=True)
class Decomposition2:
    """φ = Σ λ_q φ_q + c const."""

    n: int
    coefficients: tuple[int, ...]
    constant: int

    def reconstruct(self, table: LaverTable) -> Cochain:
        terms = [(c, phi2(table, q)) for q, c in enumerate(self.coefficients, start=1)]
        return combine(terms, table.n, 2) + const_cochain(table.n, 2, self.constant)


def decompose2(table: LaverTable, cochain: Cochain) -> Decomposition2:
    """Coordinates of a 2-cocycle in the basis φ_1, ..., φ_(2^n - 1), const.

    They are read off row 2^n - 1, where φ_q is δ(y, q) for q < 2^n.
    """
    if cochain.arity != 2:  # noqa: PLR2004
        msg = f"decompose2 needs a 2-cochain, got arity {cochain.arity}"
        raise ContractError(msg)
    _require_cocycle(table, cochain)

    if table.n == 0:
        return Decomposition2(0, (), cochain(1, 1))

    penultimate = table.size - 1
    constant = cochain(penultimate, table.size)
    coefficients = tuple(cochain(penultimate, q) - constant for q in range(1, table.size))

    return Decomposition2(table.n, coefficients, constant)


def phi3(table: LaverTable, p: int, q: int) -> Cochain:
    """Coboundary of minus the indicator of (p, q).

    φ_(p,q)(x,y,z) = δ(p,y)δ(q,z) - δ(p,x⊳y)δ(q,x⊳z) - δ(p,x)δ(q,z) + δ(p,x)δ(q,y⊳z)
    """
    check_element(p, table.size, "Index")
    check_element(q, table.size, "Index")
    dense = table.dense
    x, y, z = np.indices((table.size,) * 3) + 1

    values = (
        ((y == p) & (z == q)).astype(np.int64)
        - ((dense[x - 1, y - 1] == p) & (dense[x - 1, z - 1] == q))
        - ((x == p) & (z == q))
        + ((x == p) & (dense[y - 1, z - 1] == q))
    )

    return Cochain.from_array(table.n, values)


def phi3_prime(table: LaverTable, p: int, q: int) -> Cochain:
    """φ'_(p,q) = φ_(p,q), except φ'_(2^n,2^n) = φ_(2^n,2^n) + const."""
    cocycle = phi3(table, p, q)
    if p == q == table.size:
        return cocycle + const_cochain(table.n, 3)

    return cocycle


def _basis3_indices(table: LaverTable) -> list[tuple[int, int]]:
    if table.n == 0:
        return []
    excluded = table.size - 1
    return [
        (p, q)
        for p in range(1, table.size + 1)
        if p != excluded
        for q in range(1, table.size + 1)
    ]


@dataclass(frozen=True)
class CocycleBasis2:
    """[f_1, ..., f_(2^n - 1), const] for f = φ or ψ."""

    n: int
    family: Family
    members: tuple[Cochain, ...]


@dataclass(frozen=True)
class CocycleBasis3:
    """[φ_(p,q) for p ≠ 2^n - 1] + [const], or the primed variant."""

    n: int
    prime: bool
    labels: tuple[tuple[int, int], ...]
    members: tuple[Cochain, ...]


def basis2(table: LaverTable, family: Family | str = Family.PHI) -> CocycleBasis2:
    chosen = Family(family)
    build = phi2 if chosen is Family.PHI else psi2
    members = [build(table, q) for q in range(1, table.size)]
    members.append(const_cochain(table.n, 2))

    return CocycleBasis2(table.n, chosen, tuple(members))


def basis3(table: LaverTable, *, prime: bool = False) -> CocycleBasis3:
    build = phi3_prime if prime else phi3
    labels = _basis3_indices(table)
    members = [build(table, p, q) for p, q in labels]
    members.append(const_cochain(table.n, 3))
    logger.debug("Built {} basis 3-cocycles on A_{}", len(members), table.n)

    return CocycleBasis3(table.n, prime, tuple(labels), tuple(members))


@dataclass(frozen=True)
class Decomposition3:
    """φ = Σ c_(p,q) φ'_(p,q) + c const."""

    n: int
    coefficients: dict[tuple[int, int], int]
    constant: int

    def reconstruct(self, table: LaverTable) -> Cochain:
        terms = [(c, phi3_prime(table, p, q)) for (p, q), c in self.coefficients.items()]
        return combine(terms, table.n, 3) + const_cochain(table.n, 3, self.constant)


def decompose3(table: LaverTable, cochain: Cochain) -> Decomposition3:
    """Coordinates of a 3-cocycle in the primed basis, read off x = 2^n - 1."""
    if cochain.arity != 3:  # noqa: PLR2004
        msg = f"decompose3 needs a 3-cochain, got arity {cochain.arity}"
        raise ContractError(msg)
    _require_cocycle(table, cochain)

    if table.n == 0:
        return Decomposition3(0, {}, cochain(1, 1, 1))

    penultimate = table.size - 1
    constant = cochain(penultimate, penultimate, penultimate)
    coefficients = {
        (p, q): cochain(penultimate, p, q) - constant for p, q in _basis3_indices(table)
    }

    return Decomposition3(table.n, coefficients, constant)


def lift_cochain(n_from: int, n_to: int, cochain: Cochain) -> Cochain:
    """Pull a cochain on A_(n_from) back along the projection A_(n_to) -> A_(n_from)."""
    if cochain.n != n_from:
        msg = f"Cochain lives on A_{cochain.n}, not A_{n_from}"
        raise ContractError(msg)
    if not 0 <= n_from <= n_to:
        msg = f"Cannot lift from A_{n_from} to A_{n_to}"
        raise DomainError(msg)

    size_from = 1 << n_from
    coordinates = np.indices((1 << n_to,) * cochain.arity) % size_from
    flat = np.zeros(coordinates.shape[1:], dtype=np.int64)
    for c in coordinates:
        flat = flat * size_from + c

    return Cochain(n_to, cochain.arity, cochain.values[flat].ravel())


def period_from_cocycle(table: LaverTable, p: int) -> int:
    """per(p) as the first y with ψ_(2^(n-1))(p, y) = 1, for p < 2^n."""
    if not 1 <= p < table.size:
        msg = f"Periods are read off ψ only for 1 <= p < {table.size}, got {p}"
        raise DomainError(msg)

    row = psi2(table, table.half).as_matrix()[p - 1]

    return int(np.flatnonzero(row == 1)[0]) + 1


def threshold_from_cocycle(table: LaverTable, p: int) -> int:
    """thres(p) as (first y with θ(p, y) = 1) - 1, for p < 2^(n-1)."""
    if table.n < 1 or not 1 <= p < table.half:
        msg = f"Thresholds are read off θ only for 1 <= p < {table.half}, got {p}"
        raise DomainError(msg)

    row = theta(table).as_matrix()[p - 1]

    return int(np.flatnonzero(row == 1)[0])
