"""
TBL3 binary container for tensors and masks.

Layout (little endian): magic ``TBL3``, u32 version, u32 n1, u32 n2, u32 k,
then n1 n2 k values, slice-major and column-major within each slice.
Tensors carry float64 values, masks carry uint8.
"""

import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import FormatError
from .tensor import Tensor3

MAGIC = b"TBL3"
VERSION = 1
HEADER = struct.Struct("<4sIIII")

PathLike = Union[str, Path]


def _encode(array: np.ndarray, dtype: str) -> bytes:
    n1, n2, k = array.shape
    header = HEADER.pack(MAGIC, VERSION, n1, n2, k)
    return header + np.asarray(array, dtype=dtype).ravel(order="F").tobytes()


def _decode(buffer: bytes, offset: int, dtype: str) -> tuple[np.ndarray, int]:
    if len(buffer) - offset < HEADER.size:
        raise FormatError("truncated TBL3 header")
    magic, version, n1, n2, k = HEADER.unpack_from(buffer, offset)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported TBL3 version {version}")
    offset += HEADER.size
    count = n1 * n2 * k
    nbytes = count * np.dtype(dtype).itemsize
    if len(buffer) - offset < nbytes:
        raise FormatError(f"truncated TBL3 payload: need {nbytes} bytes")
    values = np.frombuffer(buffer, dtype=dtype, count=count, offset=offset)
    return values.reshape((n1, n2, k), order="F"), offset + nbytes


def encode_tensor(t: Tensor3) -> bytes:
    return _encode(t.data, "<f8")


def decode_tensor(buffer: bytes, offset: int = 0) -> tuple[Tensor3, int]:
    values, offset = _decode(buffer, offset, "<f8")
    return Tensor3(values), offset


def write_tensor(path: PathLike, t: Tensor3) -> None:
    Path(path).write_bytes(encode_tensor(t))


def read_tensor(path: PathLike) -> Tensor3:
    buffer = Path(path).read_bytes()
    tensor, offset = decode_tensor(buffer)
    if offset != len(buffer):
        raise FormatError(f"{path}: {len(buffer) - offset} trailing bytes")
    return tensor


def write_mask(path: PathLike, mask: np.ndarray) -> None:
    Path(path).write_bytes(_encode(np.asarray(mask, dtype=bool), "u1"))


def read_mask(path: PathLike) -> np.ndarray:
    buffer = Path(path).read_bytes()
    values, offset = _decode(buffer, 0, "u1")
    if offset != len(buffer):
        raise FormatError(f"{path}: {len(buffer) - offset} trailing bytes")
    return values.astype(bool)
