"""Minimal RIFF/WAVE reader and writer.

Only the encodings the pipeline actually meets are supported: 16-bit
integer PCM and 32-bit IEEE float, mono or multi-channel. Everything else
raises instead of guessing.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import CorruptAudioError, UnsupportedFormatError

_FMT_PCM = 1
_FMT_IEEE_FLOAT = 3
_FMT_EXTENSIBLE = 0xFFFE


def read_wav(raw: bytes) -> tuple[np.ndarray, int]:
    """Decode WAV bytes into (samples, sample_rate).

    Samples come back as float64 in [-1, 1], one column per channel
    collapsed to mono by averaging.
    """
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise UnsupportedFormatError("not a RIFF/WAVE container")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos:pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8:pos + 8 + size]
        if chunk_id == b"fmt ":
            if size < 16:
                raise CorruptAudioError("fmt chunk too small")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < size:
                raise CorruptAudioError(
                    f"data chunk truncated: header says {size} bytes, "
                    f"{len(body)} present"
                )
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None:
        raise CorruptAudioError("missing fmt chunk")
    if data is None:
        raise CorruptAudioError("missing data chunk")

    audio_format, channels, rate, _byte_rate, block_align, bits = fmt
    if audio_format == _FMT_EXTENSIBLE:
        raise UnsupportedFormatError("WAVE_FORMAT_EXTENSIBLE not supported")
    if channels < 1:
        raise CorruptAudioError("zero channels")

    if audio_format == _FMT_PCM and bits == 16:
        samples = np.frombuffer(data[: len(data) - len(data) % 2], dtype="<i2")
        samples = samples.astype(np.float64) / 32768.0
    elif audio_format == _FMT_IEEE_FLOAT and bits == 32:
        samples = np.frombuffer(data[: len(data) - len(data) % 4], dtype="<f4")
        samples = samples.astype(np.float64)
    else:
        raise UnsupportedFormatError(
            f"unsupported encoding: format={audio_format}, bits={bits}"
        )

    if block_align and len(data) % block_align:
        raise CorruptAudioError("data chunk is not a whole number of frames")
    if channels > 1:
        n = len(samples) - len(samples) % channels
        samples = samples[:n].reshape(-1, channels).mean(axis=1)
    return samples, rate


def write_wav(samples: np.ndarray, rate: int) -> bytes:
    """Encode float samples in [-1, 1] as 16-bit PCM WAV bytes.

    Quantization matches the reader's /32768 convention, so +1.0 maps to
    32767 (one LSB shy of full scale) and everything else roundtrips to
    within half an LSB.
    """
    scaled = np.round(np.asarray(samples, dtype=np.float64) * 32768.0)
    pcm = np.clip(scaled, -32768, 32767).astype("<i2").tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(pcm), b"WAVE",
        b"fmt ", 16, _FMT_PCM, 1, rate, rate * 2, 2, 16,
        b"data", len(pcm),
    )
    return header + pcm
