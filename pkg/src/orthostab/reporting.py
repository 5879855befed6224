"""Serialisation of reports: canonical JSON, CSV tables and atomic writes."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _finite(obj):
    # JSON has no inf/nan, so spell them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dumps(payload):
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    clean = _finite(json.loads(json.dumps(payload, default=_default)))
    return json.dumps(clean, indent=2, sort_keys=True, allow_nan=False) + "\n"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def checks_csv(report_dict):
    rows = [
        (c["name"], c["measured"], c["bound"], c["margin"], str(c["pass"]).lower())
        for c in report_dict["checks"]
    ]
    return csv_text(["name", "measured", "bound", "margin", "pass"], rows)


def trace_rows_csv(traces):
    """Tidy plot data: one row per (probe, n, output coordinate)."""
    rows = []
    for i, t in enumerate(traces):
        for k, n in enumerate(t.ns):
            delta = "" if k == 0 else float(t.deltas[k - 1])
            for j, v in enumerate(t.values[k]):
                rows.append((i, int(n), j, float(v), delta))
    return csv_text(["probe", "n", "coord", "value", "delta"], rows)


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def output_paths(out, fmt):
    """Files to write for ``--out`` and ``--format``; ``both`` swaps suffixes."""
    out = Path(out)
    if fmt == "both":
        return {"json": out.with_suffix(".json"), "csv": out.with_suffix(".csv")}
    return {fmt: out}
