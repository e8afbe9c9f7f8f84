"""Canonical JSON encoding used for all files and CLI output.

Rules: keys sorted, two-space indent, LF line endings, floats rendered
with 17 significant digits (lossless for float64 round trips), non-finite
floats rejected (callers map +inf to null explicitly where it has meaning).
"""

import json
import math

import numpy as np


def _scalar(value):
    if isinstance(value, (np.floating,)):
        value = float(value)
    if isinstance(value, (np.integer,)):
        value = int(value)
    if isinstance(value, np.bool_):
        value = bool(value)
    return value


def _render(value, indent: int) -> str:
    value = _scalar(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite float has no canonical JSON form")
        return format(value, ".17g")
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {_render(v, indent + 1)}"
            for k, v in sorted(value.items())
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        items = list(value)
        if not items:
            return "[]"
        parts = [f"{inner}{_render(v, indent + 1)}" for v in items]
        return "[\n" + ",\n".join(parts) + "\n" + pad + "]"
    raise TypeError(f"cannot canonically encode {type(value).__name__}")


def dumps_canonical(obj) -> str:
    """Serialize to the canonical JSON text, ending with a newline."""
    return _render(obj, 0) + "\n"
