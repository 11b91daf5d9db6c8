"""Deterministic JSON / CSV emission.

Floats are written with 17 significant digits in scientific notation so that
the text is bit-stable and round-trips through a float parser. ``None`` and
non-finite floats become ``null`` (JSON) or an empty cell (CSV).
"""
from __future__ import annotations

import io
import json
import math
from typing import Any, Iterable, List, Mapping, Sequence

import numpy as np


def fmt_float(x: float) -> str:
    return format(float(x), ".16e")


def _scalar(x: Any) -> Any:
    if isinstance(x, np.generic):
        return x.item()
    return x


def to_json(obj: Any, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def _emit(obj: Any, indent: int, level: int) -> str:
    obj = _scalar(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, complex):
        return _emit([obj.real, obj.imag], indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_emit(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(_scalar(v), (Mapping, list, tuple, np.ndarray, complex)) for v in seq):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def cell(x: Any) -> str:
    x = _scalar(x)
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return fmt_float(x) if math.isfinite(x) else ""
    return str(x)


def to_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_csv_escape(cell(v)) for v in row) + "\n")
    return buf.getvalue()


def _csv_escape(text: str) -> str:
    if any(c in text for c in ',"\n'):
        return '"' + text.replace('"', '""') + '"'
    return text


def flatten(obj: Any, prefix: str = "") -> List[tuple]:
    """Nested mappings/sequences to ``[(dotted_key, scalar), ...]``."""
    obj = _scalar(obj)
    out: List[tuple] = []
    if isinstance(obj, Mapping):
        for k, v in obj.items():
            out.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, complex):
        out.append((f"{prefix}.re", obj.real))
        out.append((f"{prefix}.im", obj.imag))
    elif isinstance(obj, (list, tuple, np.ndarray)):
        for i, v in enumerate(obj):
            out.extend(flatten(v, f"{prefix}.{i}"))
    else:
        out.append((prefix, obj))
    return out


def record_csv(record: Mapping[str, Any]) -> str:
    pairs = flatten(record)
    return to_csv([k for k, _ in pairs], [[v for _, v in pairs]])
