"""
TSNS operator files and length-prefixed noise vectors.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..algebra import Tensor3, decode_tensor, encode_tensor
from ..errors import FormatError
from .operator import Scaling, SensingOperator

MAGIC = b"TSNS"
VERSION = 1
HEADER = struct.Struct("<4sIIIIBQ")
LENGTH = struct.Struct("<Q")

_SCALING_CODES = {Scaling.RAW: 0, Scaling.INV_SQRT_M: 1}
_SCALING_BY_CODE = {code: scaling for scaling, code in _SCALING_CODES.items()}

PathLike = Union[str, Path]


def encode_operator(op: SensingOperator) -> bytes:
    parts = [HEADER.pack(MAGIC, VERSION, op.n, op.k, op.m, _SCALING_CODES[op.scaling], op.seed)]
    parts.extend(encode_tensor(op.measurement(i)) for i in range(op.m))
    return b"".join(parts)


def decode_operator(buffer: bytes) -> SensingOperator:
    if len(buffer) < HEADER.size:
        raise FormatError("truncated TSNS header")
    magic, version, n, k, m, scaling, seed = HEADER.unpack_from(buffer, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported TSNS version {version}")
    if scaling not in _SCALING_BY_CODE:
        raise FormatError(f"unknown scaling code {scaling}")
    offset = HEADER.size
    stack = np.empty((m, n, n, k))
    for i in range(m):
        tensor, offset = decode_tensor(buffer, offset)
        if tensor.shape != (n, n, k):
            raise FormatError(f"measurement {i} has shape {tensor.shape}, expected {(n, n, k)}")
        stack[i] = tensor.data
    return SensingOperator(stack, seed=seed, scaling=_SCALING_BY_CODE[scaling])


def write_operator(path: PathLike, op: SensingOperator) -> None:
    Path(path).write_bytes(encode_operator(op))


def read_operator(path: PathLike) -> SensingOperator:
    return decode_operator(Path(path).read_bytes())


def write_vector(path: PathLike, values: np.ndarray) -> None:
    values = np.asarray(values, dtype="<f8")
    Path(path).write_bytes(LENGTH.pack(values.size) + values.tobytes())


def read_vector(path: PathLike) -> np.ndarray:
    buffer = Path(path).read_bytes()
    if len(buffer) < LENGTH.size:
        raise FormatError("truncated vector header")
    (count,) = LENGTH.unpack_from(buffer, 0)
    if len(buffer) != LENGTH.size + 8 * count:
        raise FormatError(f"vector file holds {len(buffer) - LENGTH.size} bytes, expected {8 * count}")
    return np.frombuffer(buffer, dtype="<f8", count=count, offset=LENGTH.size).copy()
