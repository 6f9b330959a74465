"""Beat tracking by dynamic programming over the onset envelope.

Beats maximize accumulated onset strength minus a squared-log penalty for
deviating from the period implied by the estimated tempo. The onset
envelope is interpolated onto a fine time grid before the search so beat
placement is not quantized to the STFT hop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..audio import AudioClip
from .features import FRAME_RATE, frame_times, onset_envelope, to_internal_rate

BEAT_GRID_RATE = 200.0
TIGHTNESS = 100.0
METER = 4


@dataclass
class BeatGrid:
    """Ordered (time_s, beat_number) markers; numbers cycle 1..meter."""

    beats: list[tuple[float, int]]

    def __post_init__(self):
        times = [t for t, _ in self.beats]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("beat times must be strictly increasing")

    def times(self) -> list[float]:
        return [t for t, _ in self.beats]


def track_beats(clip: AudioClip, tempo_bpm: float) -> BeatGrid:
    """Track beats in a clip given its global tempo."""
    env = onset_envelope(to_internal_rate(clip))
    return beats_from_envelope(env, FRAME_RATE, tempo_bpm)


def beats_from_envelope(env: np.ndarray, env_rate: float, tempo_bpm: float) -> BeatGrid:
    """Beat tracking on a precomputed onset envelope."""
    if tempo_bpm <= 0:
        raise ValueError("tempo must be positive")
    env = np.asarray(env, dtype=np.float64)
    if len(env) < 2 or env.max() <= 0.0:
        return BeatGrid(beats=[])

    # Resample the envelope onto the fine beat grid.
    src_t = np.arange(len(env)) / env_rate
    duration = src_t[-1]
    n_grid = int(np.floor(duration * BEAT_GRID_RATE)) + 1
    grid_t = np.arange(n_grid) / BEAT_GRID_RATE
    fine = np.interp(grid_t, src_t, env)
    fine /= fine.max()

    period = 60.0 / tempo_bpm * BEAT_GRID_RATE
    idx = _beat_dp(fine, period)
    if len(idx) == 0:
        return BeatGrid(beats=[])

    times = grid_t[idx]
    numbers = _assign_beat_numbers(fine[idx])
    return BeatGrid(beats=list(zip(times.tolist(), numbers)))


def _beat_dp(localscore: np.ndarray, period: float) -> np.ndarray:
    n = len(localscore)
    lo = max(1, int(round(period / 2)))
    hi = int(round(period * 2))
    offsets = np.arange(lo, hi + 1)
    penalty = TIGHTNESS * (np.log(offsets / period)) ** 2

    cumscore = localscore.copy()
    backlink = np.full(n, -1, dtype=np.int64)
    thresh = 0.01 * localscore.max()
    started = False
    for i in range(n):
        prev = i - offsets
        valid = prev >= 0
        if valid.any():
            cand = cumscore[prev[valid]] - penalty[valid]
            j = int(np.argmax(cand))
            best = cand[j]
            loc = int(prev[valid][j])
        else:
            best = -np.inf
            loc = -1
        if loc >= 0:
            cumscore[i] = localscore[i] + best
        if not started and localscore[i] < thresh:
            backlink[i] = -1
        else:
            backlink[i] = loc
            started = loc >= 0 or started

    tail = int(np.argmax(cumscore[max(0, n - hi):]) + max(0, n - hi))
    beats = []
    k = tail
    while k >= 0:
        beats.append(k)
        k = backlink[k]
    return np.array(beats[::-1], dtype=np.int64)


def _assign_beat_numbers(strengths: np.ndarray) -> list[int]:
    """Number beats 1..4 so the strongest-phase beats carry number 1."""
    n = len(strengths)
    if n == 0:
        return []
    phase_scores = [strengths[ph::METER].sum() for ph in range(min(METER, n))]
    best_phase = int(np.argmax(phase_scores))
    return [((j - best_phase) % METER) + 1 for j in range(n)]


__all__ = ["BeatGrid", "track_beats", "beats_from_envelope", "frame_times"]
