"""Frame pooling for precomputed audio-encoder embeddings.

High-rate encoder output (e.g. 4800-dim frames at 345 Hz) is mean-pooled
inside fixed-length time windows, downsampling to 1/frame_len_s Hz while
keeping temporal structure. Window membership follows row timestamps, so
non-integer rows-per-window (345 Hz x 0.1 s = 34.5) yields alternating
35/34-row windows and a 25 s clip pools to exactly 250 frames.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyInputError


@dataclass
class EmbeddingMatrix:
    """frames x dims matrix with the frame rate of its rows."""

    data: np.ndarray
    frame_rate_hz: float

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data))
        if self.frame_rate_hz <= 0:
            raise ValueError("frame_rate_hz must be positive")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def dims(self) -> int:
        return self.data.shape[1]

    def validate(self) -> "EmbeddingMatrix":
        if not np.all(np.isfinite(self.data)):
            raise ValueError("embedding contains non-finite values")
        return self


def window_indices(frames: int, frame_rate_hz: float, frame_len_s: float) -> np.ndarray:
    """Output-window index of every input row.

    Row i (timestamp i / frame_rate_hz) belongs to window
    floor(timestamp / frame_len_s) == floor(i / rows_per_window). The
    single division by the product avoids double rounding: 345 Hz x 0.1 s
    is exactly 34.5 in binary, while (i/345)/0.1 drifts across window
    boundaries.
    """
    rows_per_window = frame_rate_hz * frame_len_s
    return np.floor(np.arange(frames) / rows_per_window).astype(np.int64)


def pool_frames(emb: EmbeddingMatrix, frame_len_s: float = 0.1) -> EmbeddingMatrix:
    """Mean-pool rows within ``frame_len_s`` windows.

    A trailing partial window is kept if it holds any rows. Accumulation is
    in float64 regardless of the storage dtype.
    """
    if emb.frames == 0:
        raise EmptyInputError("cannot pool an empty embedding")
    if emb.frame_rate_hz * frame_len_s < 1.0:
        raise ValueError("windows must hold at least one input row")

    idx = window_indices(emb.frames, emb.frame_rate_hz, frame_len_s)
    # Rows arrive in time order, so each window is a contiguous run.
    boundaries = np.flatnonzero(np.diff(idx, prepend=idx[0] - 1))
    data = emb.data.astype(np.float64, copy=False)
    sums = np.add.reduceat(data, boundaries, axis=0)
    counts = np.diff(np.append(boundaries, emb.frames))
    pooled = sums / counts[:, None]
    return EmbeddingMatrix(data=pooled, frame_rate_hz=1.0 / frame_len_s)


def pool_global_mean(emb: EmbeddingMatrix) -> np.ndarray:
    """Column-wise mean over all frames (the time-collapsing baseline)."""
    if emb.frames == 0:
        raise EmptyInputError("cannot average an empty embedding")
    return emb.data.astype(np.float64, copy=False).mean(axis=0)
