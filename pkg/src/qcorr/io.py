"""JSON state and POVM files.

Complex entries are ``[re, im]`` pairs; matrices are row-major lists of rows.
Numbers are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ArgumentError
from .qstate import DensityMatrix, PureState

__all__ = [
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
    "povm_to_dict",
    "povm_from_dict",
    "save_povm",
    "load_povm",
    "dumps",
]


class _Exact(float):
    """Float that serializes with 17 significant digits."""

    def __repr__(self):
        return format(float(self), ".16e")


def _pair(z) -> list:
    return [_Exact(z.real), _Exact(z.imag)]


def encode_matrix(m) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def decode_matrix(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 3 or a.shape[-1] != 2:
        raise ArgumentError("matrix entries must be [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def decode_vector(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=float)
    if a.ndim != 2 or a.shape[-1] != 2:
        raise ArgumentError("vector entries must be [re, im] pairs")
    return a[:, 0] + 1j * a[:, 1]


def _prepare(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    return o


def _emit(o) -> str:
    # json cannot emit custom float text, so exact floats are spliced in by hand
    if isinstance(o, _Exact):
        return repr(o)
    if isinstance(o, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_emit(v)}" for k, v in o.items()) + "}"
    if isinstance(o, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in o) + "]"
    return json.dumps(_prepare(o))


def dumps(obj) -> str:
    """Serialize ``obj``; floats wrapped by this module keep 17 significant digits."""
    return _emit(obj)


def state_to_dict(state) -> dict:
    d = {"dims": list(state.dims)}
    if isinstance(state, PureState):
        d["vector"] = [_pair(z) for z in state.vector]
    else:
        d["matrix"] = encode_matrix(state.matrix)
    if state.labels is not None:
        d["labels"] = list(state.labels)
    if state.label is not None:
        d["label"] = state.label
    if isinstance(state, DensityMatrix) and state.separable:
        d["separable"] = True
    return d


def state_from_dict(d: dict):
    if "dims" not in d:
        raise ArgumentError("state file needs 'dims'")
    labels = d.get("labels")
    if "vector" in d:
        return PureState(decode_vector(d["vector"]), d["dims"], labels, label=d.get("label"))
    if "matrix" in d:
        return DensityMatrix(decode_matrix(d["matrix"]), d["dims"], labels,
                             separable=bool(d.get("separable", False)), label=d.get("label"))
    raise ArgumentError("state file needs 'matrix' or 'vector'")


def save_state(state, path, extra: dict | None = None) -> Path:
    d = state_to_dict(state)
    if extra:
        d.update(extra)
    path = Path(path)
    path.write_text(dumps(d))
    return path


def load_state(path):
    with open(path) as fh:
        d = json.load(fh)
    return state_from_dict(d)


def povm_to_dict(povm) -> dict:
    return {"dim": int(povm.dim), "effects": [encode_matrix(e) for e in povm.effects]}


def povm_from_dict(d: dict):
    from .measurement import Povm

    if "effects" not in d:
        raise ArgumentError("POVM file needs 'effects'")
    effects = [decode_matrix(e) for e in d["effects"]]
    povm = Povm(effects)
    if "dim" in d and int(d["dim"]) != povm.dim:
        raise ArgumentError("POVM 'dim' does not match effect size")
    return povm


def save_povm(povm, path) -> Path:
    path = Path(path)
    path.write_text(dumps(povm_to_dict(povm)))
    return path


def load_povm(path):
    with open(path) as fh:
        return povm_from_dict(json.load(fh))
