"""Binary tensor file format for feature maps.

Layout, all integers little-endian:

    magic    8 bytes  b"LOMATNSR"
    version  u32      1
    ndim     u32      4
    dims     4 x u64  B, C, H, W
    dtype    u32      1 = float32 little-endian
    payload  B*C*H*W float32 values, row-major

The round trip is bit-lossless; every malformed-header case raises its own
error type so callers can tell corruption from version skew.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

MAGIC = b"LOMATNSR"
VERSION = 1
DTYPE_F32 = 1

_HEADER = struct.Struct("<8sII4QI")


class TensorFileError(ValueError):
    """Base class for tensor file format errors."""


class BadMagicError(TensorFileError):
    pass


class UnsupportedFormatError(TensorFileError):
    """Unknown version, ndim or dtype code."""


class TruncatedPayloadError(TensorFileError):
    pass


def write_tensor(path, fm: np.ndarray) -> None:
    """Write a (B, C, H, W) float32 tensor."""
    if fm.ndim != 4:
        raise ValueError(f"expected a 4-d tensor, got shape {fm.shape}")
    fm = np.ascontiguousarray(fm, dtype="<f4")
    header = _HEADER.pack(MAGIC, VERSION, 4, *fm.shape, DTYPE_F32)
    Path(path).write_bytes(header + fm.tobytes())


def read_tensor(path) -> np.ndarray:
    """Read a tensor written by write_tensor, bit-exactly."""
    blob = Path(path).read_bytes()
    if len(blob) < _HEADER.size:
        raise TruncatedPayloadError(
            f"file is {len(blob)} bytes, shorter than the {_HEADER.size}-byte header"
        )
    magic, version, ndim, b, c, h, w, dtype = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedFormatError(f"unsupported version {version}")
    if ndim != 4:
        raise UnsupportedFormatError(f"unsupported ndim {ndim}, expected 4")
    if dtype != DTYPE_F32:
        raise UnsupportedFormatError(f"unsupported dtype code {dtype}")
    count = b * c * h * w
    payload = blob[_HEADER.size :]
    if len(payload) != 4 * count:
        raise TruncatedPayloadError(
            f"payload is {len(payload)} bytes, dims {b}x{c}x{h}x{w} require {4 * count}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(b, c, h, w)
    return data.astype(np.float32, copy=True)
