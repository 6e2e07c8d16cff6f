"""Output helpers: atomic writes and locale-free number formatting."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

FLOAT_FMT = ".12g"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, FLOAT_FMT)
    return str(x)


def atomic_write_text(path: str | Path, text: str) -> None:
    """Write to a temp file beside ``path`` and rename over it."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def write_csv(path: str | Path, columns, rows) -> None:
    atomic_write_text(path, csv_text(columns, rows))


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def write_json(path: str | Path, obj) -> None:
    atomic_write_text(path, json_text(obj))
