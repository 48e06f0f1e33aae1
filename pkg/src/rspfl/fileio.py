"""Reading and writing instance JSON.

Two layouts are accepted::

    {"n": 3, "weights": [w_01, w_02, w_12], "costs": [...]}
    {"n": 3, "distances": [[...], [...], [...]], "costs": [...]}

Weights are listed for pairs u < v in lexicographic order.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import _json
from .flp import CostProfile, Instance
from .metric import EdgeWeights, Metric, build_metric, validate_metric


class InstanceFormatError(ValueError):
    """Malformed or inconsistent instance file."""


def _fail(source, msg):
    raise InstanceFormatError(f"{source}: {msg}")


def _numbers(source, name, value, count=None):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        _fail(source, f"field '{name}' must be a list of numbers")
    if arr.ndim != 1:
        _fail(source, f"field '{name}' must be a flat list")
    if count is not None and arr.size != count:
        _fail(source, f"field '{name}' has {arr.size} entries, expected {count}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        bad = int(np.flatnonzero(~(np.isfinite(arr) & (arr > 0)))[0])
        _fail(source, f"field '{name}[{bad}]' must be positive and finite, got {arr[bad]!r}")
    return arr


def parse_instance(text: str, source: str = "<instance>") -> tuple[Instance, EdgeWeights | None]:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        _fail(source, f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(obj, dict):
        _fail(source, "top level must be an object")
    if "n" not in obj:
        _fail(source, "missing field 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        _fail(source, f"field 'n' must be an integer >= 2, got {n!r}")
    if "costs" not in obj:
        _fail(source, "missing field 'costs'")
    costs = _numbers(source, "costs", obj["costs"], n)

    weights = None
    if "weights" in obj:
        w = _numbers(source, "weights", obj["weights"], n * (n - 1) // 2)
        weights = EdgeWeights(n, w)
        metric = build_metric(weights)
    elif "distances" in obj:
        try:
            d = np.asarray(obj["distances"], dtype=float)
        except (TypeError, ValueError):
            _fail(source, "field 'distances' must be a matrix of numbers")
        if d.shape != (n, n):
            _fail(source, f"field 'distances' has shape {d.shape}, expected ({n}, {n})")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            _fail(source, "field 'distances' must be finite and nonnegative")
        report = validate_metric(d)
        if report:
            v = report[0]
            u, w_ = v["pair"]
            _fail(source, f"field 'distances[{u}][{w_}]' violates {v['kind']} "
                          f"({len(report)} violation(s) in total)")
        metric = Metric(n, d)
    else:
        _fail(source, "need either 'weights' or 'distances'")
    return Instance(metric, CostProfile.from_raw(costs)), weights


def read_instance(path) -> Instance:
    """Read an instance from a path, or from a text stream."""
    if hasattr(path, "read"):
        return parse_instance(path.read(), getattr(path, "name", "<stream>"))[0]
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InstanceFormatError(f"{path}: {e.strerror}") from e
    return parse_instance(text, str(path))[0]


def instance_to_dict(inst: Instance, weights: EdgeWeights | None = None) -> dict:
    out = {"n": inst.n}
    if weights is not None:
        out["weights"] = list(weights.w)
    else:
        out["distances"] = [list(row) for row in inst.metric.d]
    out["costs"] = list(inst.costs.f)
    return out


def write_instance(inst: Instance, path=None, weights: EdgeWeights | None = None) -> str:
    """Serialise to JSON (17 significant digits); also write it if ``path`` is given."""
    text = _json.dumps(instance_to_dict(inst, weights)) + "\n"
    if path is not None:
        if hasattr(path, "write"):
            path.write(text)
        else:
            Path(path).write_text(text)
    return text
