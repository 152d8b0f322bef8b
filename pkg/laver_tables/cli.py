"""Command line entry point, ``laver <subcommand> -n N ...``."""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from loguru import logger
from rich.console import Console
from rich.table import Table

from laver_tables.braids.braid import (
    Mode,
    color_propagate,
    invariant2,
    invariant3,
    parse_word,
    rewrite_check,
)
from laver_tables.cohomology.cochain import Cochain, bicomplex_check, check_differentials
from laver_tables.cohomology.cocycles import (
    const_cochain,
    const_prime,
    decompose2,
    decompose3,
    phi2,
    phi3,
    phi3_prime,
    psi2,
    theta,
)
from laver_tables.cohomology.spaces import (
    check_cocycle_spaces,
    coboundary_rank,
    cocycle_rank,
    cohomology,
)
from laver_tables.config import CliConfig, OutputFormat
from laver_tables.constants import COCYCLE_CHECK_MAX_N, KERNEL_MAX_N, POSET_MAX_N, VERSION
from laver_tables.export import (
    cochain_from_json,
    cochain_to_csv,
    cochain_to_json,
    cochain_to_text,
    poset_to_dot,
    table_to_json,
    table_to_text,
    trace_to_json,
)
from laver_tables.storage import TableCache, write_table
from laver_tables.tables.checks import (
    CheckReport,
    Suite,
    check_construction,
    check_identities,
    check_selfdistributivity,
)
from laver_tables.tables.exceptions import BaseLaverError, DomainError
from laver_tables.tables.laver import LaverTable, build_table
from laver_tables.tables.poset import (
    check_beforesym,
    check_occurrence,
    check_order_axioms,
    check_structure,
    divisibility_poset,
)

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | <level>{level:7s}</level> | {message}"

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# Offsets r whose occurrence pattern `verify --suite all` checks
OCCURRENCE_OFFSETS = range(1, 9)

console = Console(highlight=False)


def _configure_logging(verbose: bool, log_file: str | None) -> None:
    logger.remove()
    logger.add(
        sys.stderr,
        format=LOG_FORMAT,
        level="DEBUG" if verbose else "WARNING",
        colorize=sys.stderr.isatty(),
    )
    if log_file:
        logger.add(log_file, rotation="10 MB", format=LOG_FORMAT, level="DEBUG")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, required=True, help="Table exponent, A_n has 2^n elements")
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug messages")
    common.add_argument("--log-file", type=str, help="Also log into this file")
    common.add_argument("--max-n", type=int, help="Largest exponent to accept")
    common.add_argument("--cache-dir", type=str, help="Directory of cached table files")
    common.add_argument("--no-cache", action="store_true", help="Neither read nor write the cache")
    common.add_argument("--seed", type=int, help="Seed for sampled sweeps")

    return common


def _format_argument(parser: argparse.ArgumentParser, *choices: OutputFormat) -> None:
    parser.add_argument(
        "--format",
        choices=[choice.value for choice in choices],
        help="Output format",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="laver", description="Laver tables and their cocycles")
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    table = commands.add_parser("table", parents=[common], help="Print A_n")
    _format_argument(table, OutputFormat.TEXT, OutputFormat.JSON)
    table.add_argument("--descending", action="store_true", help="Print rows from 2^n down")
    table.add_argument("--unroll", action="store_true", help="Print full rows, not periods")
    table.add_argument("--save", type=str, help="Write the binary table file here")

    evaluate = commands.add_parser("eval", parents=[common], help="Print p ⊳ q")
    evaluate.add_argument("p", type=int)
    evaluate.add_argument("q", type=int)

    period = commands.add_parser("period", parents=[common], help="Print the period of row p")
    period.add_argument("p", type=int)

    threshold = commands.add_parser(
        "threshold",
        parents=[common],
        help="Print the threshold of row p",
    )
    threshold.add_argument("p", type=int)

    comp = commands.add_parser("comp", parents=[common], help="Print p ∘ q")
    comp.add_argument("p", type=int)
    comp.add_argument("q", type=int)

    poset = commands.add_parser("poset", parents=[common], help="The divisibility order")
    poset.add_argument(
        "--dot",
        type=str,
        metavar="FILE",
        help="Write the Hasse diagram, - for stdout",
    )
    poset.add_argument("--lub", type=int, nargs=2, metavar=("A", "B"))
    poset.add_argument("--glb", type=int, nargs=2, metavar=("A", "B"))
    poset.add_argument("--lattice", action="store_true", help="Test for a lattice order")

    cocycle2 = commands.add_parser("cocycle2", parents=[common], help="Print a 2-cocycle")
    cocycle2.add_argument(
        "--family",
        choices=["phi", "psi", "theta", "const", "const-prime"],
        default="psi",
    )
    cocycle2.add_argument("--q", type=int, help="Index of φ_q or ψ_q")
    _format_argument(cocycle2, OutputFormat.TEXT, OutputFormat.JSON, OutputFormat.CSV)

    cocycle3 = commands.add_parser("cocycle3", parents=[common], help="Print a 3-cocycle")
    cocycle3.add_argument("--family", choices=["phi", "phi-prime", "const"], default="phi")
    cocycle3.add_argument("--p", type=int)
    cocycle3.add_argument("--q", type=int)
    _format_argument(cocycle3, OutputFormat.TEXT, OutputFormat.JSON)

    decompose = commands.add_parser("decompose", parents=[common], help="Coordinates of a cocycle")
    decompose.add_argument("cochain", type=str, help="Cochain JSON file, - for stdin")

    cohom = commands.add_parser("cohomology", parents=[common], help="Cocycles, coboundaries, H^k")
    cohom.add_argument("-k", type=int, nargs="+", default=[1, 2, 3])

    verify = commands.add_parser("verify", parents=[common], help="Run check suites")
    verify.add_argument("--suite", type=str, default=Suite.ALL.value)
    verify.add_argument("--ld-budget", type=int, help="Largest exhaustive LD sweep")

    braid = commands.add_parser("braid", parents=[common], help="Color a positive braid word")
    braid.add_argument("word", type=str, help='Generators, e.g. "1 2 1"')
    braid.add_argument("--strands", type=int, required=True)
    braid.add_argument("--colors", type=str, required=True, help='Strand colors, e.g. "1 1 1"')
    braid.add_argument("--top", type=int, help="Color of the top region (shadow mode)")
    braid.add_argument("--p", type=int, help="First index of the 3-cocycle φ_(p,q)")
    braid.add_argument("--q", type=int, help="Index of ψ_q, or second index of φ_(p,q)")
    braid.add_argument("--trace", action="store_true", help="Print the coloring as JSON")
    braid.add_argument("--rewrites", action="store_true", help="Check the invariant under rewrites")

    return parser


class Session:
    """One parsed command line with its resolved configuration."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.config = CliConfig.load(
            max_n=args.max_n,
            cache_dir=args.cache_dir,
            seed=args.seed,
            format=getattr(args, "format", None),
            ld_budget=getattr(args, "ld_budget", None),
            no_cache=args.no_cache,
        )

    def table(self, n: int | None = None) -> LaverTable:
        exponent = self.args.n if n is None else n
        if self.config.cache_dir is not None:
            return TableCache(self.config.cache_dir).get(exponent, self.config.max_n)

        return build_table(exponent, self.config.max_n)

    def emit(self, text: str) -> None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")

    def emit_cochain(self, cochain: Cochain) -> None:
        match self.config.format:
            case OutputFormat.JSON:
                self.emit(cochain_to_json(cochain))
            case OutputFormat.CSV:
                self.emit(cochain_to_csv(cochain))
            case OutputFormat.TEXT:
                self.emit(cochain_to_text(cochain))


def _print_reports(reports: list[CheckReport]) -> bool:
    table = Table(title="Checks")
    table.add_column("Suite")
    table.add_column("Cases", justify="right")
    table.add_column("Failed", justify="right")
    table.add_column("Mode")

    for report in reports:
        style = None if report.passed else "red"
        mode = "sampled" if report.sampled else "exhaustive"
        table.add_row(report.name, str(report.total), str(report.failed), mode, style=style)

    console.print(table)

    passed = True
    for report in reports:
        if report.passed:
            logger.success(report.summary())
            continue
        passed = False
        logger.error(report.summary())
        for failure in report.failures:
            console.print(f"  {report.name}: {failure}", markup=False)

    return passed


def run_table(session: Session) -> int:
    table = session.table()
    if session.args.save:
        write_table(table, Path(session.args.save))

    if session.config.format is OutputFormat.JSON:
        session.emit(table_to_json(table))
    else:
        session.emit(
            table_to_text(table, descending=session.args.descending, unroll=session.args.unroll),
        )

    return EXIT_OK


def run_eval(session: Session) -> int:
    session.emit(str(session.table().apply(session.args.p, session.args.q)))
    return EXIT_OK


def run_period(session: Session) -> int:
    session.emit(str(session.table().period(session.args.p)))
    return EXIT_OK


def run_threshold(session: Session) -> int:
    session.emit(str(session.table().threshold(session.args.p)))
    return EXIT_OK


def run_comp(session: Session) -> int:
    session.emit(str(session.table().compose(session.args.p, session.args.q)))
    return EXIT_OK


def run_poset(session: Session) -> int:
    args = session.args
    poset = divisibility_poset(session.table())
    status = EXIT_OK

    if args.dot:
        rendered = poset_to_dot(poset)
        if args.dot == "-":
            session.emit(rendered)
        else:
            Path(args.dot).write_text(rendered)
            logger.info("Wrote the Hasse diagram of ◁_{} to {}", poset.n, args.dot)
    if args.lub:
        bound = poset.lub(*args.lub)
        session.emit("none" if bound is None else str(bound))
    if args.glb:
        bound = poset.glb(*args.glb)
        session.emit("none" if bound is None else str(bound))
    if args.lattice:
        lattice, witness = poset.is_lattice()
        session.emit("lattice" if lattice else f"not a lattice, witness {witness}")
        status = EXIT_OK if lattice else EXIT_FAILED

    if not (args.dot or args.lub or args.glb or args.lattice):
        for a, b in poset.covers:
            session.emit(f"{a} -> {b}")

    return status


def _require_index(value: int | None, name: str) -> int:
    if value is None:
        msg = f"--{name} is required for this family"
        raise DomainError(msg)

    return value


def run_cocycle2(session: Session) -> int:
    table = session.table()
    family = session.args.family
    match family:
        case "phi":
            cochain = phi2(table, _require_index(session.args.q, "q"))
        case "psi":
            cochain = psi2(table, _require_index(session.args.q, "q"))
        case "theta":
            cochain = theta(table)
        case "const":
            cochain = const_cochain(table.n, 2)
        case _:
            cochain = const_prime(table)

    session.emit_cochain(cochain)

    return EXIT_OK


def run_cocycle3(session: Session) -> int:
    table = session.table()
    args = session.args
    if args.family == "const":
        cochain = const_cochain(table.n, 3)
    else:
        build = phi3_prime if args.family == "phi-prime" else phi3
        cochain = build(table, _require_index(args.p, "p"), _require_index(args.q, "q"))

    session.emit_cochain(cochain)

    return EXIT_OK


def run_decompose(session: Session) -> int:
    source = session.args.cochain
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    cochain = cochain_from_json(text)
    table = session.table(cochain.n)

    match cochain.arity:
        case 2:
            result2 = decompose2(table, cochain)
            for q, coefficient in enumerate(result2.coefficients, start=1):
                if coefficient:
                    session.emit(f"phi_{q}: {coefficient}")
            constant = result2.constant
        case 3:
            result3 = decompose3(table, cochain)
            for (p, q), coefficient in sorted(result3.coefficients.items()):
                if coefficient:
                    session.emit(f"phi'_({p},{q}): {coefficient}")
            constant = result3.constant
        case _:
            msg = f"Only 2- and 3-cocycles can be decomposed, got arity {cochain.arity}"
            raise DomainError(msg)

    session.emit(f"const: {constant}")

    return EXIT_OK


def run_cohomology(session: Session) -> int:
    table = session.table()
    output = Table(title=f"Cohomology of A_{table.n}")
    output.add_column("k", justify="right")
    output.add_column("rank Z^k", justify="right")
    output.add_column("rank B^k", justify="right")
    output.add_column("H^k")

    for k in session.args.k:
        output.add_row(
            str(k),
            str(cocycle_rank(table, k)),
            str(coboundary_rank(table, k)),
            str(cohomology(table, k)),
        )
    console.print(output)

    return EXIT_OK


def _verify_all(session: Session, table: LaverTable) -> list[CheckReport]:
    config = session.config
    n = table.n
    reports = [
        check_identities(table, Suite.ALL, config.ld_budget, config.seed),
        check_selfdistributivity(table, config.ld_budget, config.seed),
        check_construction(table),
    ]

    if n <= POSET_MAX_N:
        reports.extend([check_order_axioms(table), check_structure(table), check_beforesym(table)])
        reports.append(check_occurrence(n, 0))
        reports.extend(check_occurrence(n, r) for r in OCCURRENCE_OFFSETS if r.bit_length() <= n)
    else:
        logger.warning("Skipping poset checks on A_{}, above n = {}", n, POSET_MAX_N)

    if n <= COCYCLE_CHECK_MAX_N[3]:
        reports.append(check_differentials(table, seed=config.seed))
        reports.extend(bicomplex_check(table, k) for k in (2, 3))
    else:
        logger.warning("Skipping differential checks on A_{}, above the cap", n)

    if n <= KERNEL_MAX_N[3]:
        reports.append(check_cocycle_spaces(table))
    else:
        logger.warning("Skipping cocycle space checks on A_{}, above the cap", n)

    return reports


def run_verify(session: Session) -> int:
    table = session.table()
    suite = Suite.parse(session.args.suite)

    if suite is Suite.ALL:
        reports = _verify_all(session, table)
    else:
        reports = [check_identities(table, suite, session.config.ld_budget, session.config.seed)]

    return EXIT_OK if _print_reports(reports) else EXIT_FAILED


def _parse_colors(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(token) for token in text.split())
    except ValueError:
        msg = f"Colors must be integers, got '{text}'"
        raise DomainError(msg) from None


def run_braid(session: Session) -> int:
    args = session.args
    table = session.table()
    word = parse_word(args.word, args.strands)
    colors = _parse_colors(args.colors)

    if args.trace:
        session.emit(trace_to_json(color_propagate(table, word, colors, args.top)))

    if args.top is None:
        cochain = psi2(table, _require_index(args.q, "q"))
        value = invariant2(table, word, colors, cochain)
        mode = Mode.ARC
    else:
        cochain = phi3(table, _require_index(args.p, "p"), _require_index(args.q, "q"))
        value = invariant3(table, word, colors, args.top, cochain)
        mode = Mode.SHADOW
    session.emit(str(value))

    if args.rewrites:
        report = rewrite_check(table, word, mode, cochain, session.config.seed)
        return EXIT_OK if _print_reports([report]) else EXIT_FAILED

    return EXIT_OK


COMMANDS: dict[str, Callable[[Session], int]] = {
    "table": run_table,
    "eval": run_eval,
    "period": run_period,
    "threshold": run_threshold,
    "comp": run_comp,
    "poset": run_poset,
    "cocycle2": run_cocycle2,
    "cocycle3": run_cocycle3,
    "decompose": run_decompose,
    "cohomology": run_cohomology,
    "verify": run_verify,
    "braid": run_braid,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit status.

    0 on success, 1 when a check fails, 2 on bad usage or input.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    _configure_logging(args.verbose, args.log_file)

    try:
        session = Session(args)
        return COMMANDS[args.command](session)
    except BaseLaverError as e:
        logger.debug("{} failed: {!r}", args.command, e)
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"laver {args.command}: error: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
