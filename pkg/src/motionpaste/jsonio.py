"""Canonical JSON serialization for byte-reproducible artifacts.

Every JSON file this package writes goes through `canonical_json` so that two
runs over identical inputs produce identical bytes: keys sorted, compact
separators, floats fixed to six decimal places, no trailing whitespace.
"""

from __future__ import annotations

import json
import math
import numbers
from pathlib import Path
from typing import Any

from .errors import ValidationError


def _render(obj: Any, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, numbers.Integral):
        out.append(str(int(obj)))
    elif isinstance(obj, numbers.Real):
        value = float(obj)
        if not math.isfinite(value):
            raise ValidationError(f"non-finite float {value!r} is not serializable")
        out.append(f"{value:.6f}")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        keys = list(obj.keys())
        if any(not isinstance(k, str) for k in keys):
            raise ValidationError("JSON object keys must be strings")
        out.append("{")
        for i, key in enumerate(sorted(keys)):
            if i:
                out.append(",")
            out.append(json.dumps(key, ensure_ascii=False))
            out.append(":")
            _render(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _render(item, out)
        out.append("]")
    else:
        raise ValidationError(f"type {type(obj).__name__} is not serializable")


def canonical_json(obj: Any) -> str:
    """Serialize `obj` to the canonical single-line JSON form."""
    out: list[str] = []
    _render(obj, out)
    return "".join(out)


def write_json(obj: Any, path: Path | str) -> None:
    Path(path).write_bytes(canonical_json(obj).encode("utf-8"))


def read_json(path: Path | str) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))
