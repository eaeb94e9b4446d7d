"""Deterministic CSV/JSON emitters.

Floats are written with 12 significant digits in scientific notation, JSON
keys are sorted, and nothing time-dependent is ever written, so identical
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

SIG_DIGITS = 12


def format_float(x: float) -> str:
    return f"{float(x):.{SIG_DIGITS - 1}e}"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return str(value)


def _canonical(obj):
    """Recursively convert to plain JSON types with floats rounded to SIG_DIGITS."""
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(format_float(x)) if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _canonical(obj.real), "im": _canonical(obj.imag)}
    return obj


def csv_text(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_canonical(obj), sort_keys=True, indent=2) + "\n"


def write_csv(path: Path, rows, columns) -> Path:
    path = Path(path)
    path.write_text(csv_text(rows, columns), encoding="utf-8")
    return path


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.write_text(json_text(obj), encoding="utf-8")
    return path


def state_rows(s):
    """(site, re, im) rows for a one-particle state; the vacuum is site 0."""
    yield {"site": 0, "re": s.vacuum_amp.real, "im": s.vacuum_amp.imag}
    for j, a in enumerate(s.site_amps, start=1):
        yield {"site": j, "re": a.real, "im": a.imag}


def graph_rows(g):
    for j, nu in enumerate(g.values, start=1):
        yield {"site": j, "nu": nu}
