"""CSV and JSON emitters; every file is written to a temp name and renamed."""
from __future__ import annotations

import io
import json
import math
import os
import re
import tempfile
from pathlib import Path

import numpy as np

OUTPUT_DIR_ENV = "PDMHO_OUTPUT_DIR"

# units may themselves contain parentheses, e.g. "1/sqrt(length)"
_HEADER_RE = re.compile(r"^\s*(?P<name>[^()]+?)\s*(?:\((?P<unit>.*)\))?\s*$")


def resolve_output(path):
    """Relative paths land in ``$PDMHO_OUTPUT_DIR`` when it is set."""
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def atomic_write_text(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_number(value):
    """17 significant digits, enough to round-trip any double."""
    if isinstance(value, (str, np.str_)):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def csv_text(columns, units=None, comments=()):
    """Render named columns as CSV with ``name (unit)`` headers."""
    units = units or {}
    names = list(columns)
    lengths = {len(np.atleast_1d(columns[n])) for n in names}
    if len(lengths) > 1:
        raise ValueError("columns must have equal length")
    out = io.StringIO()
    for line in comments:
        out.write(f"# {line}\n")
    out.write(",".join(f"{n} ({units[n]})" if units.get(n) else n for n in names) + "\n")
    data = [np.atleast_1d(columns[n]) for n in names]
    for row in zip(*data):
        out.write(",".join(format_number(v) for v in row) + "\n")
    return out.getvalue()


def parse_csv_text(text):
    """Inverse of :func:`csv_text`: ``(columns, units, comments)``."""
    comments, body = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line.strip():
            body.append(line)
    if not body:
        raise ValueError("CSV text has no header")
    names, units = [], {}
    for cell in body[0].split(","):
        m = _HEADER_RE.match(cell)
        if m is None:
            raise ValueError(f"malformed header cell {cell!r}")
        names.append(m["name"])
        if m["unit"] is not None:
            units[m["name"]] = m["unit"]
    rows = [[float(tok) for tok in line.split(",")] for line in body[1:]]
    arr = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return {n: arr[:, i].copy() for i, n in enumerate(names)}, units, comments


def write_csv(path, columns, units=None, comments=()):
    atomic_write_text(path, csv_text(columns, units, comments))


def read_csv(path):
    return parse_csv_text(Path(path).read_text())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    return obj


def json_text(obj):
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def write_json(path, obj):
    atomic_write_text(path, json_text(obj))
