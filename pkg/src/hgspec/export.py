# src/hgspec/export.py
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence
import csv
import io
import json
import math

from .instrumentation import Cat
from .session import HGSession


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, complex):
        return f"{value.real!r}{value.imag:+}i"
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if hasattr(value, "value") and hasattr(value, "name"):
        return value.value
    return value


def render_json(payload: Mapping[str, Any]) -> str:
    """Sorted keys and fixed indentation so identical runs give identical bytes."""
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(columns: Sequence[str], rows: Iterable[Mapping[str, Any] | Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        if isinstance(row, Mapping):
            writer.writerow([_cell(row.get(c)) for c in columns])
        else:
            writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def write_output(text: str, out: str | Path | None, *, session: HGSession | None = None) -> None:
    """Write to a file (parents created) or to stdout when out is None or "-"."""
    if out is None or str(out) == "-":
        print(text, end="")
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    if session:
        session.emit_signal(Cat.EXPORT, "Wrote output", path=path.as_posix(), bytes=len(text.encode("utf-8")))
