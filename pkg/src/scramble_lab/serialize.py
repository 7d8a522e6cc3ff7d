"""CSV and JSON artifact writers and readers.

CSV files start with ``#`` comment lines carrying the package version and the resolved
config as JSON; the first data column is always the independent variable.
"""
from __future__ import annotations

import csv
import io
import json
import math
from datetime import datetime, timezone

import numpy as np

VOLATILE_KEYS = ("timestamp",)


def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    return x


def build_record(version: str, config: dict, artifact) -> dict:
    return {
        "scramble_lab_version": version,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": config,
        "report": artifact.report,
        "table": {"columns": artifact.columns, "rows": artifact.rows} if artifact.columns else None,
        "checks": artifact.checks,
    }


def dumps_json(record: dict) -> str:
    return json.dumps(to_jsonable(record), indent=2, sort_keys=True) + "\n"


def canonical(record: dict) -> dict:
    """Record without volatile fields, for reproducibility comparisons."""
    return {k: v for k, v in record.items() if k not in VOLATILE_KEYS}


def dumps_csv(columns, rows, header: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (header or {}).items():
        buf.write(f"# {key}: {json.dumps(to_jsonable(value), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else to_jsonable(v) for v in row])
    return buf.getvalue()


def _parse_cell(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text in ("True", "False"):
        return text == "True"
    return text


def loads_csv(text: str) -> tuple[dict, list[str], list[list]]:
    header, body = {}, []
    for line in text.splitlines(keepends=True):
        if line.startswith("# ") and not body:
            key, value = line[2:].split(": ", 1)
            header[key] = json.loads(value)
        else:
            body.append(line)
    reader = csv.reader(io.StringIO("".join(body)))
    columns = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return header, columns, rows
