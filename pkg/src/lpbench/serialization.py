"""JSON encoding shared by the library and the CLI.

Functions encode as ``{"labels": [...], "weights": [...], "values": [...]}``;
complex scalars are ``[re, im]`` pairs and infinite exponents are ``"inf"``.
"""
from __future__ import annotations

import dataclasses
import json
import math

import numpy as np

from .errors import FieldError, ShapeError
from .space import ScalarFunction, VectorFunction, WeightedSet


def _scalar(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [_scalar(x.real), _scalar(x.imag)]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return None
    return x


def to_jsonable(obj):
    """Recursively convert library objects into JSON-compatible data."""
    from .norms import Certificate, NormedSpace

    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, int, float, complex, np.number, np.bool_)):
        return _scalar(obj)
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return [to_jsonable(x) for x in obj]
        return [to_jsonable(x) for x in obj] if obj.ndim > 1 else [_scalar(x) for x in obj]
    if isinstance(obj, WeightedSet):
        return {"labels": list(obj.labels), "weights": to_jsonable(obj.weights)}
    if isinstance(obj, ScalarFunction):
        return {**to_jsonable(obj.domain), "values": to_jsonable(obj.values)}
    if isinstance(obj, VectorFunction):
        return {**to_jsonable(obj.domain), "space": obj.space.describe(), "values": to_jsonable(obj.values)}
    if isinstance(obj, NormedSpace):
        return obj.describe()
    if isinstance(obj, Certificate):
        d = {
            "name": obj.name,
            "lhs": _scalar(obj.lhs),
            "rhs": _scalar(obj.rhs),
            "slack": _scalar(obj.slack),
            "status": obj.status,
            "witness": to_jsonable(obj.witness),
        }
        if obj.details:
            d["details"] = to_jsonable(obj.details)
        if obj.parts:
            d["parts"] = [to_jsonable(p) for p in obj.parts]
        return d
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot encode {type(obj).__name__} as JSON")


def dumps(obj, **kw) -> str:
    kw.setdefault("sort_keys", True)
    return json.dumps(to_jsonable(obj), **kw)


# ---------------------------------------------------------------------------
# decoding
# ---------------------------------------------------------------------------

def _is_pair(x) -> bool:
    return isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x)


def decode_scalars(values) -> np.ndarray:
    """A flat list of numbers or ``[re, im]`` pairs (not mixed)."""
    if not isinstance(values, (list, tuple)):
        raise ShapeError("values must be a list")
    pairs = [_is_pair(v) for v in values]
    if any(pairs):
        if not all(pairs):
            raise FieldError("real and complex entries mixed in one list")
        return np.array([complex(a, b) for a, b in values])
    return np.array(values, dtype=float)


def decode_matrix(rows) -> np.ndarray:
    if not isinstance(rows, (list, tuple)) or not rows:
        raise ShapeError("matrix must be a nonempty list of rows")
    decoded = [decode_scalars(r) for r in rows]
    if len({r.shape for r in decoded}) != 1:
        raise ShapeError("matrix rows have different lengths")
    if any(np.iscomplexobj(r) for r in decoded):
        if not all(np.iscomplexobj(r) for r in decoded):
            raise FieldError("real and complex rows mixed in one matrix")
    return np.stack(decoded)


def decode_set(obj) -> WeightedSet:
    n = len(obj["values"]) if "labels" not in obj else len(obj["labels"])
    labels = obj.get("labels") or [str(i + 1) for i in range(n)]
    weights = obj.get("weights")
    return WeightedSet(labels, weights)


def decode_scalar_function(obj, domain: WeightedSet | None = None) -> ScalarFunction:
    domain = domain or decode_set(obj)
    return ScalarFunction(domain, decode_scalars(obj["values"]))


def decode_space(desc):
    from .norms import NormedSpace

    kind = desc.get("kind", "lp")
    if kind == "lp":
        return NormedSpace.lp(desc.get("p", 2), int(desc["dimension"]))
    if kind == "weighted_lp":
        return NormedSpace.weighted_lp(desc.get("p", 2), desc["weights"])
    raise ShapeError(f"cannot decode norm kind {kind!r} from JSON")


def decode_vector_function(obj, domain: WeightedSet | None = None) -> VectorFunction:
    domain = domain or decode_set(obj)
    space = decode_space(obj["space"])
    return VectorFunction(domain, space, decode_matrix(obj["values"]))
