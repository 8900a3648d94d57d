"""Render command results as json, csv or text."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, NamedTuple, Sequence

FORMATS = ("json", "csv", "text")
SIGNIFICANT_DIGITS = 15


class Report(NamedTuple):
    """What a command prints.

    ``payload`` is the JSON document; ``rows`` and ``columns`` the csv/text table.
    """

    payload: Any
    rows: list[dict[str, Any]]
    columns: Sequence[str]


def _rounded(value: Any) -> Any:
    if isinstance(value, float):
        if not math.isfinite(value):
            # JSON has no infinities; "inf", "-inf" or "nan"
            return str(value)
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {key: _rounded(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_rounded(item) for item in value]
    return value


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if isinstance(value, (list, tuple)):
        return ";".join(_cell(item) for item in value)
    return str(value)


def render_json(report: Report) -> str:
    """Keys sorted, floats cut to 15 significant digits."""
    text = json.dumps(
        _rounded(report.payload), sort_keys=True, indent=2, allow_nan=False
    )
    return text + "\n"


def render_csv(report: Report) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(report.columns)
    for row in report.rows:
        writer.writerow([_cell(row.get(column)) for column in report.columns])
    return buffer.getvalue()


def render_text(report: Report) -> str:
    """One ``key  value`` line per column for a single row, an aligned table otherwise."""
    if len(report.rows) == 1:
        width = max(len(column) for column in report.columns)
        row = report.rows[0]
        return "".join(
            f"{column:<{width}}  {_cell(row.get(column))}\n"
            for column in report.columns
        )
    table = [list(report.columns)] + [
        [_cell(row.get(column)) for column in report.columns] for row in report.rows
    ]
    widths = [max(len(line[i]) for line in table) for i in range(len(report.columns))]
    return "".join(
        "  ".join(cell.rjust(width) for cell, width in zip(line, widths)).rstrip()
        + "\n"
        for line in table
    )


def render(report: Report, output_format: str) -> str:
    renderers = {"json": render_json, "csv": render_csv, "text": render_text}
    return renderers[output_format](report)
