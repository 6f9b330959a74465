"""Binary container for embedding matrices.

Layout: little-endian header {magic "EMBD", u32 rows, u32 cols,
f32 frame_rate_hz} followed by row-major float32 values.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from ..errors import CorruptAudioError, UnsupportedFormatError
from .pooling import EmbeddingMatrix

MAGIC = b"EMBD"
_HEADER = struct.Struct("<4sIIf")


def write_embd(path, emb: EmbeddingMatrix) -> None:
    data = np.ascontiguousarray(emb.data, dtype="<f4")
    header = _HEADER.pack(MAGIC, emb.frames, emb.dims, float(emb.frame_rate_hz))
    Path(path).write_bytes(header + data.tobytes())


def read_embd(path) -> EmbeddingMatrix:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CorruptAudioError("embedding file shorter than its header")
    magic, rows, cols, rate = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise UnsupportedFormatError("not an EMBD file")
    expected = rows * cols * 4
    body = raw[_HEADER.size:]
    if len(body) < expected:
        raise CorruptAudioError(
            f"embedding payload truncated: expected {expected} bytes, got {len(body)}"
        )
    data = np.frombuffer(body[:expected], dtype="<f4").reshape(rows, cols)
    return EmbeddingMatrix(data=data.copy(), frame_rate_hz=rate)
