"""Integer cochains on A_n, the rack differential and the face maps behind it."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.constants import COCYCLE_CHECK_MAX_N, DEFAULT_SEED, KERNEL_MAX_N
from laver_tables.cohomology.linalg import IntegerMatrix
from laver_tables.tables.checks import CheckReport
from laver_tables.tables.exceptions import ContractError, DomainError, SizeLimitExceeded
from laver_tables.tables.laver import LaverTable
from laver_tables.tables.utils import check_element

IntArray = npt.NDArray[np.int64]

# Cochains up to this arity are supported, the top one only for the Z^4 rank at tiny n
MAX_ARITY = 5


class Flavor(Enum):
    """The two face maps of the rack complex."""

    OP = "op"
    ZERO = "zero"

    def __str__(self) -> str:
        match self:
            case self.OP:
                return "⊳"
            case self.ZERO:
                return "0"


@dataclass(frozen=True, eq=False)
class Cochain:
    """Integer-valued function on A_n^k.

    ``values`` is dense, with (x_1, ..., x_k) at Σ (x_i - 1) 2^((k-i)n),
    x_1 being the most significant coordinate.
    """

    n: int
    arity: int
    values: IntArray

    def __post_init__(self) -> None:
        if not 0 <= self.arity <= MAX_ARITY:
            msg = f"Cochain arity must lie in 0..{MAX_ARITY}, got {self.arity}"
            raise DomainError(msg)
        values = np.asarray(self.values)
        if values.dtype.kind not in "iub":
            msg = f"Cochain values must be integers, got dtype {values.dtype}"
            raise ContractError(msg)
        values = values.astype(np.int64).ravel()
        if values.size != 1 << (self.arity * self.n):
            msg = (
                f"Arity-{self.arity} cochain on A_{self.n} needs {1 << (self.arity * self.n)} "
                f"values, got {values.size}"
            )
            raise ContractError(msg)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def from_array(cls, n: int, array: npt.ArrayLike) -> Cochain:
        """Cochain from an array indexed [x_1 - 1, ..., x_k - 1]."""
        arr = np.asarray(array)
        return cls(n, arr.ndim, arr.ravel())

    @classmethod
    def zero(cls, n: int, arity: int) -> Cochain:
        return cls(n, arity, np.zeros(1 << (arity * n), dtype=np.int64))

    @classmethod
    def indicator(cls, n: int, point: tuple[int, ...]) -> Cochain:
        cochain = cls.zero(n, len(point))
        cochain.values[cochain.index(point)] = 1
        return cochain

    def index(self, point: tuple[int, ...]) -> int:
        if len(point) != self.arity:
            msg = f"Expected {self.arity} coordinates, got {len(point)}"
            raise DomainError(msg)
        flat = 0
        for x in point:
            check_element(x, self.size)
            flat = flat * self.size + x - 1

        return flat

    def __call__(self, *point: int) -> int:
        return int(self.values[self.index(point)])

    def as_array(self) -> IntArray:
        return self.values.reshape((self.size,) * self.arity)

    def as_matrix(self) -> IntArray:
        """Arity-2 cochain as a matrix, rows x and columns y."""
        if self.arity != 2:  # noqa: PLR2004
            msg = f"Only 2-cochains have a matrix form, got arity {self.arity}"
            raise ContractError(msg)

        return self.as_array()

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def _check_compatible(self, other: Cochain) -> None:
        if (self.n, self.arity) != (other.n, other.arity):
            msg = (
                f"Cannot combine an arity-{self.arity} cochain on A_{self.n} with an "
                f"arity-{other.arity} cochain on A_{other.n}"
            )
            raise ContractError(msg)

    def __add__(self, other: Cochain) -> Cochain:
        self._check_compatible(other)
        return Cochain(self.n, self.arity, self.values + other.values)

    def __sub__(self, other: Cochain) -> Cochain:
        self._check_compatible(other)
        return Cochain(self.n, self.arity, self.values - other.values)

    def __neg__(self) -> Cochain:
        return Cochain(self.n, self.arity, -self.values)

    def __mul__(self, factor: int) -> Cochain:
        return Cochain(self.n, self.arity, self.values * int(factor))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented

        return (self.n, self.arity) == (other.n, other.arity) and np.array_equal(
            self.values,
            other.values,
        )

    def __hash__(self) -> int:
        return hash((self.n, self.arity, self.values.tobytes()))


def combine(terms: Iterable[tuple[int, Cochain]], n: int, arity: int) -> Cochain:
    """Integer linear combination Σ c_i φ_i."""
    total = Cochain.zero(n, arity)
    for coefficient, cochain in terms:
        if coefficient:
            total = total + coefficient * cochain

    return total


def face_map(
    table: LaverTable,
    k: int,
    i: int,
    flavor: Flavor,
    point: tuple[int, ...],
) -> tuple[int, ...]:
    """d_(k;i) on a basis chain: drop x_i, acting with x_i on later coordinates for ⊳."""
    if len(point) != k:
        msg = f"Expected a {k}-tuple, got {len(point)} coordinates"
        raise DomainError(msg)
    if not 1 <= i <= k:
        msg = f"Face index {i} outside 1..{k}"
        raise DomainError(msg)

    acting = point[i - 1]
    later = point[i:]
    if flavor is Flavor.OP:
        later = tuple(table.apply(acting, x) for x in later)

    return point[: i - 1] + later


def _flatten(coordinates: list[IntArray], size: int, shape: tuple[int, ...]) -> IntArray:
    flat = np.zeros(shape, dtype=np.int64)
    for c in coordinates:
        flat = flat * size + c

    return flat


def face_terms(
    table: LaverTable,
    arity: int,
    first: int | None = None,
) -> list[tuple[int, IntArray]]:
    """Signed faces of every basis chain of the given arity.

    Returns (sign, index) pairs such that for any (arity - 1)-cochain φ,
    Σ sign * φ.values[index] is δφ evaluated on all arity-tuples (or only
    on those starting with the 0-based element ``first``).
    """
    size = table.size
    op = table.index
    if first is None:
        shape = (size,) * arity
        coordinates = list(np.indices(shape, dtype=np.int64))
    else:
        shape = (size,) * (arity - 1)
        rest = list(np.indices(shape, dtype=np.int64)) if shape else []
        coordinates = [np.full(shape, first, dtype=np.int64), *rest]

    terms = []
    for i in range(arity):
        sign = 1 if i % 2 == 0 else -1
        acted = [op[coordinates[i], c] for c in coordinates[i + 1 :]]
        terms.append((sign, _flatten(coordinates[:i] + acted, size, shape)))
        terms.append((-sign, _flatten(coordinates[:i] + coordinates[i + 1 :], size, shape)))

    return terms


def _check_cochain(table: LaverTable, k: int, cochain: Cochain) -> None:
    if cochain.arity != k:
        msg = f"Differential δ^{k} applied to an arity-{cochain.arity} cochain"
        raise ContractError(msg)
    if cochain.n != table.n:
        msg = f"Cochain lives on A_{cochain.n}, table is A_{table.n}"
        raise ContractError(msg)


def _closed_slice(table: LaverTable, k: int, cochain: Cochain, x: int) -> IntArray:
    """δ^k φ on the tuples starting with the 0-based element x, closed forms k = 1, 2, 3."""
    op = table.index
    row = op[x]
    phi = cochain.as_array()

    match k:
        case 1:
            # θ(x⊳y) - θ(y)
            return phi[row] - phi
        case 2:
            # φ(x⊳y, x⊳z) + φ(x, z) - φ(x, y⊳z) - φ(y, z)
            fixed = phi[x]
            return phi[row[:, None], row[None, :]] + fixed[None, :] - fixed[op] - phi
        case 3:
            # φ(x⊳y, x⊳z, x⊳t) + φ(x, y, z⊳t) + φ(x, z, t)
            #   - φ(x, y⊳z, y⊳t) - φ(y, z, t) - φ(x, y, t)
            fixed = phi[x]
            elements = np.arange(table.size)
            return (
                phi[row[:, None, None], row[None, :, None], row[None, None, :]]
                + fixed[elements[:, None, None], op[None, :, :]]
                + fixed[None, :, :]
                - fixed[op[:, :, None], op[:, None, :]]
                - phi
                - fixed[:, None, :]
            )

    msg = f"No closed form for δ^{k}"
    raise DomainError(msg)


def _generic_slice(table: LaverTable, cochain: Cochain, x: int) -> IntArray:
    terms = face_terms(table, cochain.arity + 1, first=x)
    return sum((sign * cochain.values[index] for sign, index in terms), np.int64(0))


def differential_slices(
    table: LaverTable,
    k: int,
    cochain: Cochain,
    *,
    generic: bool = False,
) -> Iterable[IntArray]:
    """δ^k φ one leading coordinate at a time."""
    _check_cochain(table, k, cochain)
    use_generic = generic or k > 3  # noqa: PLR2004
    for x in range(table.size):
        if use_generic:
            yield _generic_slice(table, cochain, x)
        else:
            yield _closed_slice(table, k, cochain, x)


def differential(table: LaverTable, k: int, cochain: Cochain, *, generic: bool = False) -> Cochain:
    """δ^k φ, an arity k+1 cochain.

    Closed forms are used up to k = 3; ``generic`` forces the alternating
    sum over face maps, which is also the only path for k = 4.
    """
    _check_cochain(table, k, cochain)
    limit = COCYCLE_CHECK_MAX_N.get(k)
    if limit is None or table.n > limit:
        msg = f"δ^{k} on A_{table.n} exceeds the exhaustive cap"
        raise SizeLimitExceeded(msg)

    slices = list(differential_slices(table, k, cochain, generic=generic))
    return Cochain(table.n, k + 1, np.stack(slices).ravel())


def find_cocycle_violation(table: LaverTable, cochain: Cochain) -> tuple[int, ...] | None:
    """First tuple where δφ is nonzero, or None for a cocycle."""
    k = cochain.arity
    limit = COCYCLE_CHECK_MAX_N.get(k)
    if limit is None or table.n > limit:
        msg = f"Exhaustive cocycle check of arity {k} stops at n = {limit}, got A_{table.n}"
        raise SizeLimitExceeded(msg)

    for x, values in enumerate(differential_slices(table, k, cochain)):
        bad = np.argwhere(values != 0)
        if bad.size:
            return (x + 1, *(int(c) + 1 for c in bad[0]))

    return None


def is_cocycle(table: LaverTable, cochain: Cochain) -> bool:
    return find_cocycle_violation(table, cochain) is None


def differential_rows(table: LaverTable, k: int) -> list[dict[int, int]]:
    """δ^k as sparse rows, one per (k+1)-tuple, columns indexed by k-tuples."""
    limit = KERNEL_MAX_N.get(k, 0) if k > 0 else KERNEL_MAX_N[1]
    if table.n > limit:
        msg = f"δ^{k} matrix on A_{table.n} exceeds the kernel cap n <= {limit}"
        raise SizeLimitExceeded(msg)

    terms = [(sign, index.ravel()) for sign, index in face_terms(table, k + 1)]
    rows = []
    for r in range(table.size ** (k + 1)):
        row: dict[int, int] = {}
        for sign, index in terms:
            column = int(index[r])
            row[column] = row.get(column, 0) + sign
        rows.append({column: value for column, value in row.items() if value})

    logger.debug("δ^{} on A_{}: {} rows, {} columns", k, table.n, len(rows), table.size**k)

    return rows


def differential_matrix(table: LaverTable, k: int) -> IntegerMatrix:
    """Dense matrix of δ^k."""
    rows = differential_rows(table, k)
    dense = np.zeros((len(rows), table.size**k), dtype=np.int64)
    for r, row in enumerate(rows):
        for column, value in row.items():
            dense[r, column] = value

    return IntegerMatrix(dense)


def check_differentials(
    table: LaverTable,
    samples: int = 3,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """Compare closed-form differentials with the alternating face sum on random cochains."""
    report = CheckReport("differentials")
    rng = np.random.default_rng(seed)

    for k in (1, 2, 3):
        if table.n > COCYCLE_CHECK_MAX_N[k]:
            logger.warning("Skipping δ^{} comparison on A_{}, above the cap", k, table.n)
            continue
        for _ in range(samples):
            cochain = Cochain(table.n, k, rng.integers(-3, 4, size=table.size**k))
            closed = differential(table, k, cochain)
            generic = differential(table, k, cochain, generic=True)
            report.tally(
                f"closed δ^{k} = face sum",
                (np.arange(closed.values.size),),
                generic.values,
                closed.values,
            )

    return report


Chain = Counter[tuple[int, ...]]


def boundary(table: LaverTable, flavor: Flavor, chain: Chain) -> Chain:
    """∂^⋆ = Σ_i (-1)^(i-1) d^⋆_i, extended linearly."""
    result: Chain = Counter()
    for point, coefficient in chain.items():
        for i in range(1, len(point) + 1):
            sign = 1 if i % 2 == 1 else -1
            result[face_map(table, len(point), i, flavor, point)] += sign * coefficient

    return Counter({point: c for point, c in result.items() if c})


def bicomplex_check(
    table: LaverTable,
    k: int,
    flavors: Iterable[tuple[Flavor, Flavor]] | None = None,
) -> CheckReport:
    """Check that ∂^⊳ and ∂^0 form a bicomplex on every basis k-chain.

    ``flavors`` limits the check to the given (outer, inner) face pairs.
    """
    if not 2 <= k <= 3:  # noqa: PLR2004
        msg = f"Bicomplex identities are checked for k = 2, 3, got {k}"
        raise DomainError(msg)

    pairs = set(flavors) if flavors is not None else set(product(Flavor, Flavor))
    report = CheckReport(f"bicomplex k={k}")

    for point in product(range(1, table.size + 1), repeat=k):
        chain: Chain = Counter({point: 1})
        after = {
            (outer, inner): boundary(table, outer, boundary(table, inner, chain))
            for outer, inner in pairs
        }
        for flavor in Flavor:
            if (flavor, flavor) in after:
                report.record(f"∂^{flavor}∂^{flavor} = 0", point, 0, len(after[flavor, flavor]))
        if (Flavor.OP, Flavor.ZERO) in after and (Flavor.ZERO, Flavor.OP) in after:
            mixed = _sum_chains(after[Flavor.OP, Flavor.ZERO], after[Flavor.ZERO, Flavor.OP])
            nonzero = sum(1 for c in mixed.values() if c)
            report.record("∂^⊳∂^0 + ∂^0∂^⊳ = 0", point, 0, nonzero)

        for outer, inner in pairs:
            for i in range(2, k + 1):
                for j in range(1, i):
                    lhs = face_map(table, k - 1, j, outer, face_map(table, k, i, inner, point))
                    rhs = face_map(table, k - 1, i - 1, inner, face_map(table, k, j, outer, point))
                    case = f"d^{outer}_j d^{inner}_i = d^{inner}_(i-1) d^{outer}_j"
                    report.record(case, point, 1, int(lhs == rhs))

    return report


def _sum_chains(a: Chain, b: Chain) -> Chain:
    total: Chain = Counter(a)
    for point, coefficient in b.items():
        total[point] += coefficient

    return total
