"""Global tempo estimation from onset-strength autocorrelation."""

from __future__ import annotations

import numpy as np

from ..audio import AudioClip
from ..errors import InsufficientAudioError, NoPeriodicityError
from .features import FRAME_RATE, onset_envelope, to_internal_rate

TEMPO_MIN = 40.0
TEMPO_MAX = 300.0
TEMPO_PRIOR_BPM = 120.0
TEMPO_PRIOR_OCTAVE_STD = 1.0

MIN_CLIP_SECONDS = 5.0


def estimate_tempo(clip: AudioClip) -> float:
    """Estimate global tempo in BPM.

    The onset envelope is autocorrelated and candidate lags inside the
    [40, 300] BPM range are weighted by a log-Gaussian prior centered at
    120 BPM; the best lag is refined by parabolic interpolation.

    Raises
    ------
    InsufficientAudioError
        Clip shorter than 5 seconds.
    NoPeriodicityError
        Flat onset envelope (e.g. silence): no tempo is reported rather
        than guessing.
    """
    if clip.duration_s < MIN_CLIP_SECONDS:
        raise InsufficientAudioError(
            f"tempo needs >= {MIN_CLIP_SECONDS} s, got {clip.duration_s:.2f} s"
        )
    env = onset_envelope(to_internal_rate(clip))
    return tempo_from_envelope(env, FRAME_RATE)


def tempo_from_envelope(env: np.ndarray, env_rate: float) -> float:
    """Tempo estimation on a precomputed onset envelope."""
    env = np.asarray(env, dtype=np.float64)
    if len(env) == 0 or env.std() == 0.0:
        raise NoPeriodicityError("onset envelope is flat")

    centered = env - env.mean()
    full = np.correlate(centered, centered, mode="full")
    acorr = full[len(centered) - 1:]

    lag_min = max(1, int(np.ceil(60.0 * env_rate / TEMPO_MAX)))
    lag_max = int(np.floor(60.0 * env_rate / TEMPO_MIN))
    lag_max = min(lag_max, len(acorr) - 1)
    if lag_max <= lag_min:
        raise NoPeriodicityError("envelope too short for the tempo range")

    lags = np.arange(lag_min, lag_max + 1)
    bpms = 60.0 * env_rate / lags
    prior = np.exp(-0.5 * (np.log2(bpms / TEMPO_PRIOR_BPM) / TEMPO_PRIOR_OCTAVE_STD) ** 2)
    scores = acorr[lags] * prior
    if scores.max() <= 0.0:
        raise NoPeriodicityError("no positive autocorrelation in tempo range")

    best = int(np.argmax(scores))
    lag = float(lags[best])
    # Parabolic refinement around the winning lag.
    if 0 < best < len(lags) - 1:
        y0, y1, y2 = scores[best - 1], scores[best], scores[best + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom < 0.0:
            lag += 0.5 * (y0 - y2) / denom

    bpm = 60.0 * env_rate / lag
    return float(np.clip(bpm, TEMPO_MIN, TEMPO_MAX))
