import time
from collections.abc import Callable

import numpy as np
from loguru import logger
from rich.console import Console
from rich.panel import Panel
from rich.progress import track
from rich.table import Table
from simple_term_menu import TerminalMenu

from laver_tables.cohomology.spaces import cocycle_rank
from laver_tables.tables.checks import CheckReport, check_identities, check_selfdistributivity
from laver_tables.tables.laver import build_table, clear_table_cache

logger.remove()

REPEATS = 5


def _construct(n: int) -> None:
    clear_table_cache()
    build_table(n)


def _selfdistributivity(n: int) -> CheckReport:
    return check_selfdistributivity(build_table(n))


def _identities(n: int) -> CheckReport:
    return check_identities(build_table(n), "all")


def _kernel2(n: int) -> int:
    clear_table_cache()
    return cocycle_rank(build_table(n), 2)


def _kernel3(n: int) -> int:
    clear_table_cache()
    return cocycle_rank(build_table(n), 3)


WORKLOADS: dict[str, tuple[Callable[[int], object], range]] = {
    "construction": (_construct, range(0, 17, 2)),
    "selfdistributivity": (_selfdistributivity, range(2, 9)),
    "identity suites": (_identities, range(2, 7)),
    "2-cocycle kernel": (_kernel2, range(1, 6)),
    "3-cocycle kernel": (_kernel3, range(1, 4)),
}


class Benchmark:
    """Class for timing one workload over a range of exponents."""

    def __init__(self) -> None:
        self._times: list[float] = []
        self.console = Console()
        self.table = Table()

        self.table.add_column("n")
        self.table.add_column("Best (ms)")
        self.table.add_column("Mean (ms)")
        self.table.add_column("Result")

    def _run_one(self, workload: Callable[[int], object], n: int) -> None:
        """Time one exponent REPEATS times."""
        times = []
        result: object = None

        for _ in range(REPEATS):
            t_start = time.perf_counter()
            result = workload(n)
            t_end = time.perf_counter()
            times.append((t_end - t_start) * 1e3)

        if isinstance(result, CheckReport):
            shown = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        else:
            shown = "-" if result is None else str(result)

        self.table.add_row(str(n), f"{np.min(times):.2f}", f"{np.mean(times):.2f}", shown)
        self._times.extend(times)

    def run(self, name: str) -> None:
        """Run one workload over all its exponents."""
        workload, exponents = WORKLOADS[name]

        for n in track(exponents, description=f"Timing {name}"):
            self._run_one(workload, n)

        # Draw the result table
        self.console.print(self.table)

        lines = [
            f"Workload:   {name}",
            f"Exponents:  {exponents.start}..{exponents.stop - 1}",
            f"Runs:       {len(self._times)}",
            "",
            f"Total time: {np.sum(self._times):9.2f} ms",
            f"Slowest:    {np.max(self._times):9.2f} ms",
        ]

        panel = Panel("\n".join(lines), title="Summary")
        self.console.print(panel)


def run() -> None:
    """Run the benchmark."""
    names = list(WORKLOADS)

    # Make the user choose a workload
    menu = TerminalMenu(names)
    choice_idx = menu.show()

    Benchmark().run(names[choice_idx])


if __name__ == "__main__":
    run()
