"""CSV and JSON writers shared by the CLI commands."""
from __future__ import annotations

import json
import math

from . import __version__
from .relations import COMPONENT_KEYS

SCHEMA = 1
HEADER = f"# duality-lab v{__version__} schema={SCHEMA}"

REPORT_COLUMNS = ("relation", "trial", "seed", "n", "memory_dim", "lhs", "rhs", "residual",
                  "satisfied", "is_identity") + COMPONENT_KEYS


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.17g}"
    return str(value)


def report_row(report, **meta) -> dict:
    row = dict(meta)
    row.update({
        "relation": report.relation.value,
        "n": report.n,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "residual": report.residual,
        "satisfied": report.satisfied,
        "is_identity": report.is_identity,
    })
    for k in COMPONENT_KEYS:
        row[k] = report.components.get(k)
    return row


def write_csv(rows, columns, fh) -> None:
    fh.write(HEADER + "\n")
    fh.write(",".join(columns) + "\n")
    for row in rows:
        fh.write(",".join(fmt(row.get(c)) for c in columns) + "\n")


def _jsonable(v):
    if isinstance(v, float) and math.isnan(v):
        return None
    if hasattr(v, "item"):
        return v.item()
    return v


def write_json(rows, columns, fh, **meta) -> None:
    doc = {"tool": "duality-lab", "version": __version__, "schema": SCHEMA, **meta,
           "columns": list(columns),
           "rows": [{c: _jsonable(row.get(c)) for c in columns} for row in rows]}
    json.dump(doc, fh, indent=1)
    fh.write("\n")


def write_rows(rows, columns, fh, fmt_name: str = "csv", **meta) -> None:
    if fmt_name == "json":
        write_json(rows, columns, fh, **meta)
    else:
        write_csv(rows, columns, fh)
