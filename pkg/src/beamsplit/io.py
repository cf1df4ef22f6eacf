"""File formats: pmf JSON, trajectory and density CSV, deterministic report JSON.

A pmf file is either explicit,

    {"pmf": [p0, p1, ...], "tail_tolerance": 1e-12}

or a geometric family member,

    {"family": "geometric", "mean": 1.0, "truncation_epsilon": 1e-12}.

An explicit file may also carry ``"truncated": true`` for a stored prefix of
an infinite-support law.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .pmf import DEFAULT_TOLERANCE, Pmf, geometric_pmf, make_pmf

__all__ = [
    "dumps_json",
    "file_digest",
    "load_pmf",
    "pmf_from_json",
    "pmf_to_json",
    "save_pmf",
    "write_density_csv",
    "write_trajectory_csv",
]


def pmf_from_json(obj) -> Pmf:
    if not isinstance(obj, dict):
        raise ValidationError("pmf JSON must be an object")
    if "pmf" in obj:
        values = obj["pmf"]
        if not isinstance(values, list) or not values:
            raise ValidationError('"pmf" must be a non-empty list of numbers')
        try:
            arr = np.array([float(v) for v in values])
        except (TypeError, ValueError):
            raise ValidationError('"pmf" entries must be numbers') from None
        tol = float(obj.get("tail_tolerance", DEFAULT_TOLERANCE))
        return make_pmf(arr, tol, truncated=bool(obj.get("truncated", False)))
    if obj.get("family") == "geometric":
        if "mean" not in obj:
            raise ValidationError('geometric pmf JSON needs "mean"')
        return geometric_pmf(float(obj["mean"]), float(obj.get("truncation_epsilon", DEFAULT_TOLERANCE)))
    raise ValidationError('pmf JSON needs either "pmf" or "family": "geometric"')


def load_pmf(path) -> Pmf:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc.msg}") from None
    return pmf_from_json(obj)


def pmf_to_json(p: Pmf) -> dict:
    out = {"pmf": [float(v) for v in p.probs], "tail_tolerance": p.tail_tolerance}
    if p.truncated:
        out["truncated"] = True
    return out


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"+inf"' if x > 0 else '"-inf"'
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with floats at 17 significant digits and infinities as "+inf"/"-inf".

    Key order is the caller's insertion order, so equal inputs give
    byte-identical text.
    """
    return _encode(obj, indent, 0) + "\n"


def save_pmf(path, p: Pmf) -> None:
    Path(path).write_text(dumps_json(pmf_to_json(p)))


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _open_text(target):
    if hasattr(target, "write"):
        return target, False
    return open(target, "w", newline=""), True


def write_trajectory_csv(traj, target) -> None:
    """Rows ``eta,n,prob`` for every grid point and state."""
    fh, close = _open_text(target)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["eta", "n", "prob"])
        for eta, p in traj:
            for n, v in enumerate(p.probs):
                w.writerow([format(eta, ".17g"), n, format(float(v), ".17g")])
    finally:
        if close:
            fh.close()


def write_density_csv(density, u_grid, target) -> None:
    """Rows ``u,density`` of a radial density on ``u_grid``."""
    u_grid = np.asarray(u_grid, dtype=float)
    vals = density(u_grid)
    fh, close = _open_text(target)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "density"])
        for u, f in zip(u_grid, vals):
            w.writerow([format(float(u), ".17g"), format(float(f), ".17g")])
    finally:
        if close:
            fh.close()


def trajectory_to_csv_text(traj) -> str:
    buf = io.StringIO()
    write_trajectory_csv(traj, buf)
    return buf.getvalue()
