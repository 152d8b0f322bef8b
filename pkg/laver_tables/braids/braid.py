"""Positive braid words colored by A_n and the cocycle invariants they carry."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt
from loguru import logger

from laver_tables.cohomology.cochain import Cochain, find_cocycle_violation
from laver_tables.constants import DEFAULT_SEED, EXHAUSTIVE_COLORINGS, SAMPLED_COLORINGS
from laver_tables.tables.checks import CheckReport
from laver_tables.tables.exceptions import BraidParseError, ContractError, DomainError
from laver_tables.tables.laver import LaverTable
from laver_tables.tables.utils import check_element

IntArray = npt.NDArray[np.int64]


class Mode(Enum):
    """Arc colorings use 2-cocycles, shadow colorings add region colors and 3-cocycles."""

    ARC = "arc"
    SHADOW = "shadow"

    @property
    def arity(self) -> int:
        return 2 if self is Mode.ARC else 3


@dataclass(frozen=True)
class BraidWord:
    """Positive braid word, letter i crossing strands i and i + 1 (bottom strand is 1)."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            msg = f"A braid needs at least one strand, got {self.strands}"
            raise BraidParseError(msg)
        for letter in self.letters:
            if not 1 <= letter < self.strands:
                msg = f"Generator {letter} is outside 1..{self.strands - 1}"
                raise BraidParseError(msg)

    def __str__(self) -> str:
        return " ".join(str(letter) for letter in self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def rewrites(self) -> list[BraidWord]:
        """Every word one braid relation away.

        Covers σ_i σ_(i+1) σ_i = σ_(i+1) σ_i σ_(i+1) in both directions and
        σ_i σ_j = σ_j σ_i for |i - j| >= 2, at every position.
        """
        letters = self.letters
        words = []
        for k in range(len(letters) - 2):
            a, b, c = letters[k : k + 3]
            if a == c and abs(a - b) == 1:
                words.append(letters[:k] + (b, a, b) + letters[k + 3 :])
        for k in range(len(letters) - 1):
            a, b = letters[k : k + 2]
            if abs(a - b) >= 2:  # noqa: PLR2004
                words.append(letters[:k] + (b, a) + letters[k + 2 :])

        return [BraidWord(self.strands, word) for word in words]


def parse_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated generator indices."""
    letters = []
    for token in text.split():
        try:
            letters.append(int(token))
        except ValueError:
            msg = f"Braid generator '{token}' is not an integer"
            raise BraidParseError(msg) from None

    return BraidWord(strands, tuple(letters))


def random_word(rng: np.random.Generator, strands: int, length: int) -> BraidWord:
    if strands < 2:  # noqa: PLR2004
        return BraidWord(strands)

    return BraidWord(strands, tuple(int(x) for x in rng.integers(1, strands, size=length)))


@dataclass(frozen=True)
class Crossing:
    """Input colors at one crossing, and the color of the region above it in shadow mode."""

    position: int
    lower: int
    upper: int
    region: int | None = None


@dataclass(frozen=True)
class ColoringTrace:
    word: BraidWord
    initial: tuple[int, ...]
    crossings: tuple[Crossing, ...]
    final: tuple[int, ...]
    top: int | None = None


def _check_colors(table: LaverTable, word: BraidWord, colors: tuple[int, ...]) -> None:
    if len(colors) != word.strands:
        msg = f"{word.strands} strands need {word.strands} colors, got {len(colors)}"
        raise DomainError(msg)
    for color in colors:
        check_element(color, table.size, "Color")


def region_colors(table: LaverTable, colors: tuple[int, ...], top: int) -> tuple[int, ...]:
    """Colors of the regions between strands, bottom region first, top region d last.

    Below a strand colored s lies s ⊳ (the region above it).
    """
    check_element(top, table.size, "Top color")
    regions = [top]
    for color in reversed(colors):
        regions.append(table.apply(color, regions[-1]))

    return tuple(reversed(regions))


def color_propagate(
    table: LaverTable,
    word: BraidWord,
    colors: tuple[int, ...],
    top: int | None = None,
) -> ColoringTrace:
    """Push colors through the crossings, (a, b) becoming (a ⊳ b, a)."""
    _check_colors(table, word, colors)
    if top is not None:
        check_element(top, table.size, "Top color")

    current = list(colors)
    crossings = []
    for i in word.letters:
        a, b = current[i - 1], current[i]
        region = None
        if top is not None:
            region = top
            for above in reversed(current[i + 1 :]):
                region = table.apply(above, region)
        crossings.append(Crossing(i, a, b, region))
        current[i - 1], current[i] = table.apply(a, b), a

    return ColoringTrace(word, tuple(colors), tuple(crossings), tuple(current), top)


def _require_cocycle(table: LaverTable, cochain: Cochain, arity: int) -> None:
    if cochain.arity != arity:
        msg = f"Expected an arity-{arity} cocycle, got arity {cochain.arity}"
        raise ContractError(msg)
    violation = find_cocycle_violation(table, cochain)
    if violation is not None:
        msg = f"Braid invariants need a cocycle, δφ{violation} ≠ 0"
        raise ContractError(msg)


def invariant2(
    table: LaverTable,
    word: BraidWord,
    colors: tuple[int, ...],
    cochain: Cochain,
    *,
    check: bool = True,
) -> int:
    """Σ φ(a, b) over the crossings."""
    if check:
        _require_cocycle(table, cochain, 2)
    trace = color_propagate(table, word, colors)

    return sum(cochain(c.lower, c.upper) for c in trace.crossings)


def invariant3(
    table: LaverTable,
    word: BraidWord,
    colors: tuple[int, ...],
    top: int,
    cochain: Cochain,
    *,
    check: bool = True,
) -> int:
    """Σ φ(a, b, d) over the crossings, d the color of the region above."""
    if check:
        _require_cocycle(table, cochain, 3)
    trace = color_propagate(table, word, colors, top)

    return sum(
        cochain(c.lower, c.upper, c.region) for c in trace.crossings if c.region is not None
    )


def colorings(
    size: int,
    count: int,
    seed: int = DEFAULT_SEED,
    budget: int = EXHAUSTIVE_COLORINGS,
) -> tuple[IntArray, bool]:
    """All of A_n^count, or a seeded sample when there are more than ``budget``; flags sampling."""
    total = size**count
    if total <= budget:
        grid = np.indices((size,) * count, dtype=np.int64).reshape(count, -1).T + 1
        return grid, False

    rng = np.random.default_rng(seed)
    return rng.integers(1, size + 1, size=(min(SAMPLED_COLORINGS, budget), count)), True


@dataclass(frozen=True)
class _BatchTrace:
    lowers: IntArray
    uppers: IntArray
    regions: IntArray | None
    finals: IntArray


def _batch_trace(
    table: LaverTable,
    word: BraidWord,
    colors: IntArray,
    tops: IntArray | None,
) -> _BatchTrace:
    """color_propagate on many colorings at once, with 0-based colors."""
    op = table.index
    current = colors.copy() - 1
    count = len(word)
    lowers = np.empty((count, len(current)), dtype=np.int64)
    uppers = np.empty_like(lowers)
    regions = np.empty_like(lowers) if tops is not None else None

    for step, i in enumerate(word.letters):
        a, b = current[:, i - 1].copy(), current[:, i].copy()
        lowers[step], uppers[step] = a, b
        if regions is not None and tops is not None:
            region = tops - 1
            for position in range(word.strands - 1, i, -1):
                region = op[current[:, position], region]
            regions[step] = region
        current[:, i - 1], current[:, i] = op[a, b], a

    return _BatchTrace(lowers, uppers, regions, current + 1)


def _batch_invariant(trace: _BatchTrace, cochain: Cochain) -> IntArray:
    values = cochain.as_array()
    if trace.regions is None:
        return values[trace.lowers, trace.uppers].sum(axis=0)

    return values[trace.lowers, trace.uppers, trace.regions].sum(axis=0)


def rewrite_check(
    table: LaverTable,
    word: BraidWord,
    mode: Mode | str,
    cochain: Cochain,
    seed: int = DEFAULT_SEED,
    budget: int = EXHAUSTIVE_COLORINGS,
) -> CheckReport:
    """Compare final colors and invariant values across every one-step rewrite of the word.

    The cochain is not required to be a cocycle, so non-cocycles can be
    shown to break invariance.
    """
    chosen = Mode(mode)
    if cochain.arity != chosen.arity or cochain.n != table.n:
        msg = f"{chosen.value} mode needs an arity-{chosen.arity} cochain on A_{table.n}"
        raise ContractError(msg)

    extra = 1 if chosen is Mode.SHADOW else 0
    cases, sampled = colorings(table.size, word.strands + extra, seed, budget)
    colors = cases[:, : word.strands]
    tops = cases[:, word.strands] if extra else None
    inputs = tuple(cases.T)

    report = CheckReport(f"rewrites of '{word}' ({chosen.value})", sampled=sampled)
    base = _batch_trace(table, word, colors, tops)
    base_values = _batch_invariant(base, cochain)

    for rewritten in word.rewrites():
        other = _batch_trace(table, rewritten, colors, tops)
        same_colors = np.all(base.finals == other.finals, axis=1)
        report.tally(f"'{rewritten}': final colors", inputs, 1, same_colors)
        other_values = _batch_invariant(other, cochain)
        report.tally(f"'{rewritten}': invariant", inputs, base_values, other_values)

    logger.debug(report.summary())

    return report
