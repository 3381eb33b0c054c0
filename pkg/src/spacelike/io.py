"""JSON files for behaviors and quantum setups.

Behavior file::

    {"preparations": ["W", ...],
     "local_contexts": [{"name": "x0", "outcomes": ["0", "1"]}, ...],
     "remote_contexts": [...],          # absent for a single-region behavior
     "table": [...]}                    # preparation > local > remote > e_i > d_j

Quantum setup file::

    {"dims": [d_A, d_B],                # or [d] for A-then-B on one system
     "state": [[[re, im], ...], ...],
     "local_measurements": [{"name": "z", "outcomes": [...], "projectors": [matrix, ...]}],
     "remote_measurements": [...]}

Matrix entries may also be plain real numbers.  Floats are written with
Python's shortest round-trip representation, so reloading is exact.
"""

import json

import numpy as np

from .core.types import Behavior, JointBehavior
from .errors import InvalidInputError
from .quantum.bipartite import BipartiteSetup, SequentialSetup
from .quantum.states import DensityMatrix, ProjectiveMeasurement


def _contexts_to_list(contexts):
    return [{"name": c.name, "outcomes": list(c.outcomes)} for c in contexts]


def behavior_to_dict(b):
    if isinstance(b, JointBehavior):
        return {"preparations": list(b.preparations),
                "local_contexts": _contexts_to_list(b.local_contexts),
                "remote_contexts": _contexts_to_list(b.remote_contexts),
                "table": b.to_nested()}
    if isinstance(b, Behavior):
        return {"preparations": list(b.preparations),
                "local_contexts": _contexts_to_list(b.contexts),
                "table": b.to_nested()}
    raise TypeError(f"not a behavior: {type(b).__name__}")


def _require(d, key, what):
    if key not in d:
        raise InvalidInputError(f"{what}: missing key {key!r}")
    return d[key]


def behavior_from_dict(d):
    """Behavior or JointBehavior, depending on whether ``remote_contexts`` is present."""
    if not isinstance(d, dict):
        raise InvalidInputError("behavior file must contain a JSON object")
    preps = _require(d, "preparations", "behavior file")
    local = d.get("local_contexts", d.get("contexts"))
    if local is None:
        raise InvalidInputError("behavior file: missing key 'local_contexts'")
    table = _require(d, "table", "behavior file")
    try:
        if "remote_contexts" in d:
            return JointBehavior(preps, local, d["remote_contexts"], table)
        return Behavior(preps, local, table)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"behavior file: {exc}") from exc


def encode_matrix(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data, what="matrix"):
    try:
        rows = []
        for row in data:
            out = []
            for z in row:
                if isinstance(z, (list, tuple)):
                    re, im = z
                    out.append(complex(float(re), float(im)))
                else:
                    out.append(complex(float(z), 0.0))
            rows.append(out)
        m = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{what}: entries must be numbers or [re, im] pairs") from exc
    if m.ndim != 2:
        raise InvalidInputError(f"{what}: expected a 2-D array")
    return m


def _measurement_to_dict(m):
    return {"name": m.name, "outcomes": list(m.outcomes),
            "projectors": [encode_matrix(p) for p in m.projectors]}


def _measurement_from_dict(d):
    name = _require(d, "name", "measurement")
    projs = [decode_matrix(p, f"projector of {name!r}") for p in _require(d, "projectors", "measurement")]
    return ProjectiveMeasurement(name, projs, d.get("outcomes"))


def setup_to_dict(setup, extra=None):
    if isinstance(setup, BipartiteSetup):
        out = {"dims": list(setup.dims), "preparation": setup.preparation,
               "state": encode_matrix(setup.state.matrix),
               "local_measurements": [_measurement_to_dict(m) for m in setup.local_measurements],
               "remote_measurements": [_measurement_to_dict(m) for m in setup.remote_measurements]}
    else:
        out = {"dims": [setup.state.dim], "preparation": setup.preparation,
               "state": encode_matrix(setup.state.matrix),
               "local_measurements": [_measurement_to_dict(m) for m in setup.first_measurements],
               "remote_measurements": [_measurement_to_dict(m) for m in setup.second_measurements]}
    if extra:
        out.update(extra)
    return out


def setup_from_dict(d):
    """BipartiteSetup for ``dims: [d_A, d_B]``, SequentialSetup for ``[d]``."""
    if not isinstance(d, dict):
        raise InvalidInputError("setup file must contain a JSON object")
    dims = _require(d, "dims", "setup file")
    state = DensityMatrix(decode_matrix(_require(d, "state", "setup file"), "state"))
    try:
        local = [_measurement_from_dict(m) for m in _require(d, "local_measurements", "setup file")]
        remote = [_measurement_from_dict(m) for m in _require(d, "remote_measurements", "setup file")]
    except (KeyError, TypeError) as exc:
        raise InvalidInputError(f"setup file: {exc}") from exc
    prep = d.get("preparation", "rho")
    if len(dims) == 2:
        return BipartiteSetup(state, dims, local, remote, prep)
    if len(dims) == 1:
        if state.dim != int(dims[0]):
            raise InvalidInputError(f"state dimension {state.dim} != dims {dims}")
        return SequentialSetup(state, local, remote, prep)
    raise InvalidInputError(f"dims must have one or two entries, got {dims}")


def load_json(path):
    """Parse a JSON file; syntax errors name the line and column."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2, allow_nan=False) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))


def load_behavior(path):
    return behavior_from_dict(load_json(path))


def save_behavior(b, path):
    write_json(behavior_to_dict(b), path)


def load_setup(path):
    return setup_from_dict(load_json(path))
