"""CSV, JSON and table rendering of command results.

Machine formats carry 17 significant digits so that every float survives a
parse and re-emit unchanged; tables use 6.
"""

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

MACHINE_DIGITS = 17
TABLE_DIGITS = 6
COMMENT_PREFIX = "#"

TRACE_COLUMNS = ["n", "cos_q_rec", "cos_q2_rec", "cos_q_dir", "cos_q2_dir", "abs_dev"]

_INT_PATTERN = re.compile(r"[+-]?\d+")


@dataclass
class Report:
    """Result of one command.

    `results` holds scalars only. Commands producing a sequence also fill
    `columns` and `rows`; `footer` lines are free-text notes.
    """

    command: str
    inputs: dict[str, Any]
    results: dict[str, Any] = field(default_factory=dict)
    columns: Optional[list[str]] = None
    rows: list[dict[str, Any]] = field(default_factory=list)
    footer: list[str] = field(default_factory=list)

    @property
    def is_tabular(self) -> bool:
        return self.columns is not None


@dataclass
class CsvDocument:
    columns: list[str]
    rows: list[dict[str, Any]]
    comments: list[str] = field(default_factory=list)


def format_value(value: Any, digits: int = MACHINE_DIGITS) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


def parse_value(text: str) -> Any:
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if _INT_PATTERN.fullmatch(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def format_csv(document: CsvDocument) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=document.columns, lineterminator="\n")
    writer.writeheader()
    for row in document.rows:
        writer.writerow({key: format_value(row.get(key)) for key in document.columns})
    for comment in document.comments:
        buffer.write(f"{COMMENT_PREFIX} {comment}\n")
    return buffer.getvalue()


def parse_csv(text: str) -> CsvDocument:
    """Inverse of format_csv: comment lines are collected as the footer."""
    lines = text.splitlines(keepends=True)
    comments = [line[len(COMMENT_PREFIX):].strip() for line in lines if line.startswith(COMMENT_PREFIX)]
    body = [line for line in lines if not line.startswith(COMMENT_PREFIX)]
    reader = csv.DictReader(body)
    rows = [{key: parse_value(value) for key, value in row.items()} for row in reader]
    return CsvDocument(list(reader.fieldnames or []), rows, comments)


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {key: _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        # strict JSON has no NaN/Inf
        return value if math.isfinite(value) else None
    return value


def render_json(report: Report) -> str:
    document: dict[str, Any] = {"command": report.command, "inputs": report.inputs}
    document.update(report.results)
    if report.is_tabular:
        document["rows"] = report.rows
    if report.footer:
        document["notes"] = report.footer
    return json.dumps(_jsonable(document), indent=2) + "\n"


def render_csv(report: Report) -> str:
    if report.is_tabular:
        return format_csv(CsvDocument(report.columns, report.rows, report.footer))
    return format_csv(CsvDocument(list(report.results), [report.results], report.footer))


def render_table(report: Report) -> str:
    lines = [f"{report.command}"]
    if report.results:
        width = max(len(key) for key in report.results)
        for key, value in report.results.items():
            lines.append(f"  {key:<{width}}  {format_value(value, TABLE_DIGITS)}")
    if report.is_tabular:
        cells = [[format_value(row.get(key), TABLE_DIGITS) for key in report.columns] for row in report.rows]
        widths = [
            max([len(key)] + [len(line[i]) for line in cells])
            for i, key in enumerate(report.columns)
        ]
        lines.append("  ".join(key.rjust(w) for key, w in zip(report.columns, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for line in cells:
            lines.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    for note in report.footer:
        lines.append(note)
    return "\n".join(lines) + "\n"


RENDERERS = {
    "csv": render_csv,
    "json": render_json,
    "table": render_table,
}


def render(report: Report, output_format: str) -> str:
    return RENDERERS[output_format](report)
