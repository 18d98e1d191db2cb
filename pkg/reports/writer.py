import csv
import io
import json
import logging
import math
from pathlib import Path

from config.constants import ReportConfig
from core.errors import InvalidParameter
from reports.formatting import Report, format_number


def render_csv(report: Report) -> str:
    """Header line then one line per row, comma separated, LF terminated"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator=ReportConfig.LINE_TERMINATOR)
    writer.writerow(report.columns)
    for row in report:
        writer.writerow(row.formatted())
    return buffer.getvalue()


def _json_value(value: float | int | str) -> str:
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, float) and not math.isfinite(value):
        return "null"
    return format_number(value)


def render_json(report: Report) -> str:
    """JSON document with the column list and one object per row.

    Numbers are written by hand so they keep 17 significant digits; NaN and
    infinities become null.
    """
    lines = [
        "{",
        f'  "command": {json.dumps(report.command)},',
        f'  "columns": [{", ".join(json.dumps(c) for c in report.columns)}],',
        '  "rows": [',
    ]
    for index, row in enumerate(report):
        fields = ", ".join(f"{json.dumps(key)}: {_json_value(value)}" for key, value in row.items)
        separator = "," if index < len(report) - 1 else ""
        lines.append(f"    {{{fields}}}{separator}")
    lines.append("  ]")
    lines.append("}")
    return ReportConfig.LINE_TERMINATOR.join(lines) + ReportConfig.LINE_TERMINATOR


def render(report: Report, fmt: str) -> str:
    match fmt:
        case "csv":
            return render_csv(report)
        case "json":
            return render_json(report)
        case _:
            raise InvalidParameter("format", f"expected one of {ReportConfig.FORMATS}, got {fmt}")


def write_report(report: Report, fmt: str, output_path: str | None) -> str:
    """Render the report and write it in one piece; returns the rendered text.

    Without an output path the text goes to standard output.
    """
    text = render(report, fmt)
    if output_path is None:
        print(text, end="")
        return text
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding=ReportConfig.ENCODING, newline="") as handle:
        handle.write(text)
    logging.info(f"Wrote {len(report)} {report.command} row(s) to {path}")
    return text
