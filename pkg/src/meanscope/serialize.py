"""JSON encoding of matrices, maps and non-finite floats."""
from __future__ import annotations

import math

import numpy as np

from .errors import InputError
from .maps import (
    CongruenceThen,
    Compression,
    HadamardCompression,
    NormalizedTrace,
    SchurMultiplier,
    VectorState,
)


def encode_matrix(M) -> list:
    """Nested row-major lists with every entry as ``[re, im]``."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 3 and arr.shape[-1] == 2:
        M = arr[..., 0] + 1j * arr[..., 1]
        return M.real if not np.any(M.imag) else M
    if arr.ndim in (1, 2):
        return arr
    raise InputError("matrix must be nested lists of numbers or [re, im] pairs")


def encode_vector(x) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(x, dtype=complex).ravel()]


def decode_vector(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2 and arr.shape[-1] == 2:
        return arr[:, 0] + 1j * arr[:, 1]
    return arr.ravel()


def map_to_dict(spec) -> dict:
    if spec is None:
        return {"kind": "none"}
    if isinstance(spec, Compression):
        return {"kind": "compression", "V": encode_matrix(spec.V)}
    if isinstance(spec, VectorState):
        return {"kind": "vector", "x": encode_vector(spec.x)}
    if isinstance(spec, SchurMultiplier):
        return {"kind": "schur", "S": encode_matrix(spec.S)}
    if isinstance(spec, NormalizedTrace):
        return {"kind": "trace", "d": spec.d}
    if isinstance(spec, CongruenceThen):
        return {"kind": "congruence", "A0": encode_matrix(spec.A0), "inner": map_to_dict(spec.inner)}
    if isinstance(spec, HadamardCompression):
        return {"kind": "hadamard", "d": spec.d}
    raise InputError(f"cannot serialize map {spec!r}")


def map_from_dict(data: dict):
    kind = data.get("kind")
    if kind == "none":
        return None
    if kind == "compression":
        return Compression(decode_matrix(data["V"]))
    if kind == "vector":
        return VectorState(decode_vector(data["x"]))
    if kind == "schur":
        return SchurMultiplier(decode_matrix(data["S"]))
    if kind == "trace":
        return NormalizedTrace(int(data["d"]))
    if kind == "congruence":
        return CongruenceThen(decode_matrix(data["A0"]), map_from_dict(data["inner"]))
    if kind == "hadamard":
        return HadamardCompression(int(data["d"]))
    raise InputError(f"unknown map kind {kind!r}")


def scrub_nonfinite(obj):
    """Replace NaN/inf by strings; returns ``(clean, found_nonfinite)``."""
    found = False

    def walk(o):
        nonlocal found
        if isinstance(o, float) or isinstance(o, np.floating):
            o = float(o)
            if math.isnan(o):
                found = True
                return "NaN"
            if math.isinf(o):
                found = True
                return "Infinity" if o > 0 else "-Infinity"
            return o
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.bool_):
            return bool(o)
        if isinstance(o, dict):
            return {k: walk(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [walk(v) for v in o]
        return o

    return walk(obj), found
