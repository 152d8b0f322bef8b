"""Text, JSON, CSV and DOT renderings of tables, cochains, posets and braid traces."""

from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np
from jinja2 import BaseLoader, Environment

from laver_tables.braids.braid import ColoringTrace
from laver_tables.cohomology.cochain import Cochain
from laver_tables.tables.exceptions import ContractError, TableFormatError
from laver_tables.tables.laver import LaverTable
from laver_tables.tables.poset import DivisibilityPoset

DOT_TEMPLATE = """digraph A{{ n }} {
    rankdir = BT;
    node [shape = circle];
{%- for node in nodes %}
    {{ node }};
{%- endfor %}
{%- for a, b in edges %}
    {{ a }} -> {{ b }};
{%- endfor %}
}
"""

TABLE_TEMPLATE = (
    "{% if title %}{{ title }}\n{% endif %}"
    "{% for p, row in rows %}{{ p | string | rjust(width) }} |"
    "{% for value in row %} {{ value | string | rjust(width) }}{% endfor %}\n"
    "{% endfor %}"
)

_environment = Environment(loader=BaseLoader)
_environment.filters["rjust"] = lambda text, width: text.rjust(width)


def _dumps(data: Any) -> str:
    return json.dumps(data, separators=(",", ":"))


def table_to_json(table: LaverTable) -> str:
    """{"n":…,"periods":[…],"rows":[[…],…]} with one period per row."""
    return _dumps(
        {
            "n": table.n,
            "periods": [int(p) for p in table.periods],
            "rows": [[int(v) for v in row] for row in table.rows],
        },
    )


def table_to_text(table: LaverTable, *, descending: bool = False, unroll: bool = False) -> str:
    """Aligned rows "p | p⊳1 p⊳2 ...", one period per row unless ``unroll`` is set."""
    rows = [
        (p, table.dense[p - 1].tolist() if unroll else table.row(p).tolist())
        for p in range(1, table.size + 1)
    ]
    if descending:
        rows.reverse()

    template = _environment.from_string(TABLE_TEMPLATE)

    return template.render(title=f"A_{table.n}", rows=rows, width=len(str(table.size)))


def cochain_to_json(cochain: Cochain) -> str:
    """{"n":…,"k":…,"values":[…]}, values in big-endian coordinate order."""
    return _dumps({"n": cochain.n, "k": cochain.arity, "values": cochain.values.tolist()})


def cochain_to_csv(cochain: Cochain) -> str:
    """2-cochain as a matrix: rows are x, columns are y, the header lists y."""
    if cochain.arity != 2:  # noqa: PLR2004
        msg = f"CSV export needs a 2-cochain, got arity {cochain.arity}"
        raise ContractError(msg)

    size = 1 << cochain.n
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", *range(1, size + 1)])
    for x, row in enumerate(cochain.as_matrix().tolist(), start=1):
        writer.writerow([x, *row])

    return buffer.getvalue()


def cochain_to_text(cochain: Cochain) -> str:
    """2-cochains as an aligned matrix, other arities as "point: value" lines."""
    if cochain.arity == 2:  # noqa: PLR2004
        matrix = cochain.as_matrix().tolist()
        width = max(len(str(v)) for row in matrix for v in row)
        width = max(width, len(str(len(matrix))))
        template = _environment.from_string(TABLE_TEMPLATE)
        return template.render(title=None, rows=enumerate(matrix, start=1), width=width)

    array = cochain.as_array()
    lines = [
        f"{tuple(int(i) + 1 for i in point)}: {int(array[point])}"
        for point in zip(*np.nonzero(array), strict=True)
    ]

    return "\n".join(lines) + "\n" if lines else "0\n"


def poset_to_dot(poset: DivisibilityPoset) -> str:
    """Hasse diagram as a DOT digraph, nodes ascending and covers sorted."""
    template = _environment.from_string(DOT_TEMPLATE)

    return template.render(
        n=poset.n,
        nodes=range(1, poset.size + 1),
        edges=sorted(poset.covers),
    )


def trace_to_json(trace: ColoringTrace) -> str:
    """Per-crossing records of a coloring, in the order the crossings are met."""
    crossings = []
    for c in trace.crossings:
        record = {"generator": c.position, "lower": c.lower, "upper": c.upper}
        if c.region is not None:
            record["region"] = c.region
        crossings.append(record)

    data: dict[str, Any] = {
        "strands": trace.word.strands,
        "word": list(trace.word.letters),
        "initial": list(trace.initial),
        "crossings": crossings,
        "final": list(trace.final),
    }
    if trace.top is not None:
        data["top"] = trace.top

    return _dumps(data)


def cochain_from_json(text: str) -> Cochain:
    """Parse the output of cochain_to_json."""
    try:
        data = json.loads(text)
        n, arity, values = int(data["n"]), int(data["k"]), data["values"]
    except (ValueError, KeyError, TypeError) as e:
        msg = f"Not a cochain document: {e}"
        raise TableFormatError(msg) from e

    if len(values) != 1 << (n * arity):
        msg = f"A {arity}-cochain on A_{n} needs {1 << (n * arity)} values, got {len(values)}"
        raise TableFormatError(msg)

    return Cochain(n, arity, np.array(values, dtype=np.int64))
