"""
JSON form of set values: {"type": <class name>, "fields": {...}}.
Floats are written with repr precision, so a dump reloads bit-identically.
"""

import json
from typing import Any, Dict

import numpy as np

from src.errors import SetError
from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
    Strip,
    Zonotope,
    ZonotopeBundle,
)


def _matrix(a: np.ndarray) -> Dict[str, Any]:
    # shape is kept so (n, 0) matrices survive the round trip
    return {"shape": list(a.shape), "data": a.reshape(-1).tolist()}


def _unmatrix(d: Dict[str, Any]) -> np.ndarray:
    return np.array(d["data"], dtype=float).reshape(d["shape"])


def to_dict(X) -> Dict[str, Any]:
    if isinstance(X, IntervalVector):
        fields = {"lower": X.lower.tolist(), "upper": X.upper.tolist()}
    elif isinstance(X, Ellipsoid):
        fields = {"center": X.center.tolist(), "shape": _matrix(X.shape)}
    elif isinstance(X, Zonotope):
        fields = {"center": X.center.tolist(), "generators": _matrix(X.generators)}
    elif isinstance(X, ConstrainedZonotope):
        fields = {
            "center": X.center.tolist(),
            "generators": _matrix(X.generators),
            "constraint_matrix": _matrix(X.constraint_matrix),
            "constraint_offset": X.constraint_offset.tolist(),
        }
    elif isinstance(X, ZonotopeBundle):
        fields = {"members": [to_dict(m) for m in X.members]}
    elif isinstance(X, Strip):
        fields = {
            "normal": X.normal.tolist(),
            "offset": X.offset,
            "noise_lower": X.noise_lower,
            "noise_upper": X.noise_upper,
        }
    elif isinstance(X, EmptySet):
        fields = {"dim": X.dim}
    else:
        raise SetError(f"cannot serialize {type(X).__name__}")
    return {"type": type(X).__name__, "fields": fields}


def from_dict(data: Dict[str, Any]):
    kind, f = data.get("type"), data.get("fields", {})
    if kind == "IntervalVector":
        return IntervalVector(f["lower"], f["upper"])
    if kind == "Ellipsoid":
        return Ellipsoid(f["center"], _unmatrix(f["shape"]))
    if kind == "Zonotope":
        return Zonotope(f["center"], _unmatrix(f["generators"]))
    if kind == "ConstrainedZonotope":
        return ConstrainedZonotope(
            f["center"],
            _unmatrix(f["generators"]),
            _unmatrix(f["constraint_matrix"]),
            f["constraint_offset"],
        )
    if kind == "ZonotopeBundle":
        return ZonotopeBundle(tuple(from_dict(m) for m in f["members"]))
    if kind == "Strip":
        return Strip(f["normal"], f["offset"], f["noise_lower"], f["noise_upper"])
    if kind == "EmptySet":
        return EmptySet(int(f["dim"]))
    raise SetError(f"unknown set type in JSON: {kind!r}")


def dumps(X) -> str:
    return json.dumps(to_dict(X))


def loads(text: str):
    return from_dict(json.loads(text))
