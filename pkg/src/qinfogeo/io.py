"""JSON encodings for matrices, channels and counterexample inputs.

Matrix: ``{"dim": n, "entries": [[re, im], ...]}`` row-major. Non-square
matrices (Kraus operators between different dimensions) carry
``"rows"``/``"cols"`` in place of ``"dim"``.
"""

import json
import math

import numpy as np

from .states import KrausChannel

MAX_FILE_DIM = 64


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=complex)
    entries = [[float(z.real), float(z.imag)] for z in A.reshape(-1)]
    rows, cols = A.shape
    if rows == cols:
        return {"dim": rows, "entries": entries}
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise ValueError("matrix object needs an 'entries' field")
    if "dim" in obj:
        rows = cols = int(obj["dim"])
    else:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    if rows < 1 or cols < 1:
        raise ValueError("matrix dimensions must be positive")
    if max(rows, cols) > MAX_FILE_DIM:
        raise ValueError(f"matrix dimension {max(rows, cols)} exceeds the limit of {MAX_FILE_DIM}")
    entries = obj["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    values = np.empty(rows * cols, dtype=complex)
    for k, pair in enumerate(entries):
        if len(pair) != 2:
            raise ValueError(f"entry {k} is not a [re, im] pair")
        re, im = float(pair[0]), float(pair[1])
        if not (math.isfinite(re) and math.isfinite(im)):
            raise ValueError(f"entry {k} is not finite")
        values[k] = complex(re, im)
    return values.reshape(rows, cols)


def channel_to_json(beta: KrausChannel) -> dict:
    return {
        "in_dim": beta.in_dim,
        "out_dim": beta.out_dim,
        "kraus": [matrix_to_json(K) for K in beta.kraus],
    }


def channel_from_json(obj) -> KrausChannel:
    kraus = tuple(matrix_from_json(K) for K in obj["kraus"])
    beta = KrausChannel(kraus)
    if beta.in_dim != int(obj["in_dim"]) or beta.out_dim != int(obj["out_dim"]):
        raise ValueError("declared channel dimensions do not match the Kraus operators")
    return beta


def _reject_constant(token):
    raise ValueError(f"non-finite JSON number {token}")


def load_json(path):
    with open(path) as fh:
        return json.load(fh, parse_constant=_reject_constant)


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(load_json(path))


def save_matrix(path, A):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(A), fh)


def encode_inputs(value):
    """Recursively encode arrays, lists and dicts of trial inputs for JSON."""
    if isinstance(value, np.ndarray) and value.ndim == 2:
        return matrix_to_json(value)
    if isinstance(value, np.ndarray):
        return {"vector": [float(x) for x in value]}
    if isinstance(value, dict):
        return {k: encode_inputs(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_inputs(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def decode_inputs(value):
    if isinstance(value, dict) and "entries" in value:
        return matrix_from_json(value)
    if isinstance(value, dict) and "vector" in value:
        return np.asarray(value["vector"], dtype=float)
    if isinstance(value, dict):
        return {k: decode_inputs(v) for k, v in value.items()}
    if isinstance(value, list):
        return [decode_inputs(v) for v in value]
    return value
