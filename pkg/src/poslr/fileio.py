"""Flat-file formats: whitespace stream files and comma-separated tables."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core_types import Stream
from .errors import ConfigError


def fmt(x) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(x), ".17g")


def write_stream(path, stream: Stream) -> None:
    lines = [f"d={stream.d}"]
    for t in range(len(stream)):
        row = [str(t + 1)] + [fmt(v) for v in stream.X[t]] + [fmt(stream.y[t])]
        lines.append(" ".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_stream(path) -> Stream:
    """Parse a ``d=<int>`` header followed by ``t x1 ... xd y`` rows."""
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    except OSError as exc:
        raise ConfigError(f"cannot read data file {path}: {exc}") from None
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].replace(" ", "").startswith("d="):
        raise ConfigError(f"{path}: first line must be 'd=<int>'")
    try:
        d = int(lines[0].replace(" ", "")[2:])
    except ValueError:
        raise ConfigError(f"{path}: bad header {lines[0]!r}") from None
    rows = []
    for n, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != d + 2:
            raise ConfigError(f"{path}:{n}: expected {d + 2} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError:
            raise ConfigError(f"{path}:{n}: non-numeric field") from None
    if not rows:
        raise ConfigError(f"{path}: no data rows")
    arr = np.array(rows)
    return Stream(arr[:, 1:d + 1], arr[:, d + 1])


def write_table(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def read_table(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")
