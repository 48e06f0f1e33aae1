"""JSON emission with every float written to 17 significant digits."""
from __future__ import annotations

import json
import math

import numpy as np


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    # keep floats recognisable as floats after a round trip
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def dumps(obj, indent: int | None = 2) -> str:
    return "".join(_encode(obj, indent, 0))


def _encode(obj, indent, level):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = ", " if indent is None else ","
    if isinstance(obj, (bool, np.bool_)):
        yield "true" if obj else "false"
    elif obj is None:
        yield "null"
    elif isinstance(obj, (int, np.integer)):
        yield str(int(obj))
    elif isinstance(obj, (float, np.floating)):
        yield _float(float(obj))
    elif isinstance(obj, str):
        yield json.dumps(obj)
    elif isinstance(obj, dict):
        if not obj:
            yield "{}"
            return
        yield "{"
        first = True
        for k, v in obj.items():
            if not first:
                yield sep
            first = False
            yield pad + json.dumps(str(k)) + ": "
            yield from _encode(v, indent, level + 1)
        yield end + "}"
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            yield "[]"
            return
        # flat numeric lists stay on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool)
               for v in items):
            yield "[" + ", ".join("".join(_encode(v, None, 0)) for v in items) + "]"
            return
        yield "["
        for i, v in enumerate(items):
            if i:
                yield sep
            yield pad
            yield from _encode(v, indent, level + 1)
        yield end + "]"
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
