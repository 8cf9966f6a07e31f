"""Tables, CSV/JSON serialisation and atomic file output."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

SURFACE_HEADER = (
    "axis1",
    "axis2",
    "qA_share_global",
    "n_local_optima",
    "tie",
    "discontinuity_adjacent",
)


@dataclass
class Table:
    header: Sequence[str]
    rows: List[Sequence[Any]]
    # "shortest" writes floats as repr; "precision" rounds to significant digits
    float_mode: str = "precision"
    meta: Dict[str, Any] = field(default_factory=dict)


def format_float(x: float, precision: Optional[int]) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if precision is None:
        return repr(float(x))
    return format(float(x), f".{precision}g")


def _csv_cell(value: Any, precision: Optional[int]) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value, precision)
    if isinstance(value, (tuple, list)):
        return " ".join(_csv_cell(v, precision) for v in value)
    return str(value)


def to_csv(table: Table, precision: int = 12) -> str:
    digits = None if table.float_mode == "shortest" else precision
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_csv_cell(v, digits) for v in row])
    return buf.getvalue()


def _json_value(value: Any, precision: Optional[int]) -> Any:
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return value if precision is None else float(format(value, f".{precision}g"))
    if isinstance(value, dict):
        return {k: _json_value(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v, precision) for v in value]
    return value


def to_json(table: Table, meta: Dict[str, Any], precision: int = 12) -> str:
    digits = None if table.float_mode == "shortest" else precision
    data = [
        {k: _json_value(v, digits) for k, v in zip(table.header, row)} for row in table.rows
    ]
    doc = {"meta": _json_value({**meta, **table.meta}, None), "data": data}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_atomic(path: Optional[str], text: str) -> None:
    """Write ``text`` to ``path`` via a sibling temp file and rename.

    ``path=None`` writes to stdout.
    """
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def surface_table(sweep) -> Table:
    """Long-format table of a completed sweep."""
    return Table(SURFACE_HEADER, [list(r) for r in sweep.rows()], float_mode="shortest")


def emit_surface(sweep) -> str:
    return to_csv(surface_table(sweep))


def parse_surface_csv(text: str) -> Table:
    """Inverse of ``emit_surface``: recover typed rows from the CSV text."""
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != SURFACE_HEADER:
        raise ValueError(f"unexpected surface header {header}")
    rows = []
    for rec in reader:
        a1, a2, share, n_local, tie, disc = rec
        rows.append(
            [
                float(a1),
                None if a2 == "" else float(a2),
                float(share),
                int(n_local),
                tie == "1",
                disc == "1",
            ]
        )
    return Table(SURFACE_HEADER, rows, float_mode="shortest")
