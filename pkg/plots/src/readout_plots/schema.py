"""The benchmark CSV contract, restated here so this package stands alone.

Result files carry exactly these columns, in order::

    task,n,state,method,shots,xi,e0,e1,gamma,G_mode,rep_count,mean_E,sem_E,exact_E,seed

Floats are written with repr and parse back exactly; empty fields mean "not
applicable".  A ``<name>.csv.meta.json`` sidecar, when present, carries the
task metadata (advantage-map grids, ratio lattice, device markers).
"""
from __future__ import annotations

import csv
import json
import pathlib

COLUMNS = [
    "task", "n", "state", "method", "shots", "xi", "e0", "e1", "gamma",
    "G_mode", "rep_count", "mean_E", "sem_E", "exact_E", "seed",
]

_INT_COLUMNS = {"n", "shots", "rep_count", "seed"}
_FLOAT_COLUMNS = {"xi", "e0", "e1", "gamma", "mean_E", "sem_E", "exact_E"}


class SchemaError(ValueError):
    pass


def read_rows(path) -> list[dict]:
    """Parse a results CSV; raises :class:`SchemaError` naming any missing column."""
    text = pathlib.Path(path).read_text()
    reader = csv.DictReader(text.splitlines())
    have = reader.fieldnames or []
    missing = [c for c in COLUMNS if c not in have]
    if missing:
        raise SchemaError(f"CSV {path} is missing column(s): {', '.join(missing)}")
    rows = []
    for rec in reader:
        row: dict = {}
        for key in COLUMNS:
            val = rec[key]
            if val == "":
                row[key] = None
            elif key in _INT_COLUMNS:
                row[key] = int(val)
            elif key in _FLOAT_COLUMNS:
                row[key] = float(val)
            else:
                row[key] = val
        rows.append(row)
    if not rows:
        raise SchemaError(f"CSV {path} has no data rows")
    return rows


def read_metadata(csv_path) -> dict | None:
    """Load the sidecar metadata if the harness wrote one."""
    sidecar = pathlib.Path(str(csv_path) + ".meta.json")
    if not sidecar.exists():
        return None
    return json.loads(sidecar.read_text())
