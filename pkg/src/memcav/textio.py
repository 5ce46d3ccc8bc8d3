"""CSV and JSON emission with embedded metadata.

CSV files use '.' decimals, ',' delimiters, and '#'-prefixed metadata
header lines; floats are printed with 17 significant digits so a value
round-trips losslessly.  JSON cannot carry comments, so metadata goes into
a leading "metadata" object instead.  Nothing time-dependent is ever
written: identical inputs must give byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def metadata_lines(metadata: dict) -> list[str]:
    return [f"# {key} = {format_value(val)}" for key, val in metadata.items()]


def write_csv(path, columns, rows, metadata: dict | None = None) -> None:
    lines = metadata_lines(metadata or {})
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path) -> dict[str, np.ndarray]:
    """Read a metadata-headed CSV back as float columns (non-floats -> nan)."""
    header = None
    data: list[list[float]] = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = [c.strip() for c in line.split(",")]
            continue
        row = []
        for cell in line.split(","):
            try:
                row.append(float(cell))
            except ValueError:
                row.append(float("nan"))
        data.append(row)
    if header is None:
        raise ValueError(f"{path}: no header row found")
    table = np.asarray(data, dtype=float) if data else np.empty((0, len(header)))
    return {name: table[:, i] for i, name in enumerate(header)}


def write_json(path, payload: dict, metadata: dict | None = None) -> None:
    doc = {"metadata": metadata or {}}
    doc.update(payload)
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=False) + "\n",
                          encoding="utf-8")
