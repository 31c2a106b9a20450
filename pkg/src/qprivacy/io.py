"""JSON documents for states, channels and sequences.

State:    {"dims": [d1, ...], "matrix": [[[re, im], ...], ...]}
Channel:  {"dim_in": d, "dim_out": d, "kraus": [matrix, ...]}
Sequence: {"B": {"limit": state, "states": [state, ...]}, "E": {...}}

Matrices are row-major; each entry is a ``[re, im]`` pair.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ShapeMismatch
from .qchannel import KrausChannel, validate_channel
from .qstate import DensityOperator, validate_density


class DocumentError(ValueError):
    """The document is not well-formed JSON or misses a required field."""


def encode_matrix(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(doc) -> np.ndarray:
    try:
        arr = np.asarray(doc, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"matrix is not a nested list of [re, im] pairs: {exc}") from None
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DocumentError(f"matrix must have shape rows x cols x 2, got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_doc(rho: DensityOperator) -> dict:
    return {"dims": list(rho.dims), "matrix": encode_matrix(rho.matrix)}


def state_from_doc(doc) -> DensityOperator:
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise DocumentError("state document needs a 'matrix' field")
    m = decode_matrix(doc["matrix"])
    dims = doc.get("dims")
    if dims is not None and not (isinstance(dims, list) and all(isinstance(x, int) for x in dims)):
        raise DocumentError("'dims' must be a list of integers")
    return validate_density(m, dims)


def channel_to_doc(channel: KrausChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [encode_matrix(a) for a in channel.kraus],
    }


def channel_from_doc(doc) -> KrausChannel:
    if not isinstance(doc, dict) or not isinstance(doc.get("kraus"), list):
        raise DocumentError("channel document needs a 'kraus' list")
    ch = validate_channel([decode_matrix(k) for k in doc["kraus"]])
    for key, actual in (("dim_in", ch.dim_in), ("dim_out", ch.dim_out)):
        if key in doc and doc[key] != actual:
            raise ShapeMismatch(f"{key}={doc[key]} does not match Kraus shape ({actual})")
    return ch


def read_json(path) -> object:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def load_state(path) -> DensityOperator:
    return state_from_doc(read_json(path))


def load_channel(path) -> KrausChannel:
    return channel_from_doc(read_json(path))


def save_state(rho: DensityOperator, path) -> None:
    Path(path).write_text(json.dumps(state_to_doc(rho)))


def save_channel(channel: KrausChannel, path) -> None:
    Path(path).write_text(json.dumps(channel_to_doc(channel)))
