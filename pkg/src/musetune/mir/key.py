"""Global key and mode estimation via Krumhansl-Kessler profile matching."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..audio import AudioClip
from ..errors import AtonalError, InsufficientAudioError
from .features import chroma_frames, to_internal_rate

PITCH_NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")

# Krumhansl & Kessler probe-tone profiles ("Cognitive Foundations of
# Musical Pitch", p. 30).
KK_MAJOR = np.array([6.35, 2.23, 3.48, 2.33, 4.38, 4.09, 2.52, 5.19, 2.39, 3.66, 2.29, 2.88])
KK_MINOR = np.array([6.33, 2.68, 3.52, 5.38, 2.60, 3.53, 2.54, 4.75, 3.98, 2.69, 3.34, 3.17])

MIN_CLIP_SECONDS = 5.0
DEFAULT_CORRELATION_FLOOR = 0.5


@dataclass(frozen=True)
class KeyLabel:
    """Tonal center as pitch class 0-11 (0 = C) plus major/minor mode."""

    tonic: int
    mode: str

    def __post_init__(self):
        if not 0 <= self.tonic <= 11:
            raise ValueError("tonic must be in [0, 11]")
        if self.mode not in ("major", "minor"):
            raise ValueError("mode must be 'major' or 'minor'")

    @property
    def name(self) -> str:
        return f"{PITCH_NAMES[self.tonic]} {self.mode}"


def estimate_key(
    clip: AudioClip, correlation_floor: float = DEFAULT_CORRELATION_FLOOR
) -> KeyLabel:
    """Estimate the global key of a clip.

    The frame-averaged chroma vector is correlated against all 24 rotated
    Krumhansl-Kessler profiles; the best correlation wins. Ties break to
    the lower pitch class, then major before minor.

    Raises
    ------
    InsufficientAudioError
        Clip shorter than 5 seconds.
    AtonalError
        All correlations below ``correlation_floor`` (noise, silence).
    """
    if clip.duration_s < MIN_CLIP_SECONDS:
        raise InsufficientAudioError(
            f"key needs >= {MIN_CLIP_SECONDS} s, got {clip.duration_s:.2f} s"
        )
    chroma = chroma_frames(to_internal_rate(clip)).mean(axis=0)
    return key_from_chroma(chroma, correlation_floor=correlation_floor)


def key_from_chroma(
    chroma: np.ndarray, correlation_floor: float = DEFAULT_CORRELATION_FLOOR
) -> KeyLabel:
    chroma = np.asarray(chroma, dtype=np.float64)
    if chroma.std() == 0.0:
        raise AtonalError("flat chroma vector")

    best: KeyLabel | None = None
    best_corr = -np.inf
    # Candidate order encodes the tie-break: tonic ascending, major first.
    for tonic in range(12):
        for mode, profile in (("major", KK_MAJOR), ("minor", KK_MINOR)):
            rotated = np.roll(profile, tonic)
            corr = float(np.corrcoef(chroma, rotated)[0, 1])
            if corr > best_corr:
                best_corr = corr
                best = KeyLabel(tonic, mode)
    if best is None or best_corr < correlation_floor:
        raise AtonalError(f"best profile correlation {best_corr:.3f} below floor")
    return best
