"""Fixed-length audio clips and the crop policy that produces them.

Every downstream stage consumes clips of at most ``clip_len_s`` seconds.
Long tracks are cropped from an "active" interval most of the time so the
pipeline hears more than song intros, but the draw is deterministic per
(seed, track_id) so reruns reproduce the same dataset.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import EmptyTrackError
from .resample import resample
from .wavio import read_wav, write_wav

SUPPORTED_TARGET_RATES = (16000, 22050, 44100)

MAX_CLIP_SECONDS = 25.0


@dataclass
class AudioClip:
    """A decoded PCM segment with provenance.

    ``offset_s`` is the segment's start relative to the source track, so a
    clip always knows which part of the original audio it carries.
    """

    track_id: str
    samples: np.ndarray
    sample_rate: int
    offset_s: float = 0.0

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("clip samples must be one-dimensional")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate

    def validate(self, max_duration_s: float | None = MAX_CLIP_SECONDS) -> "AudioClip":
        """Check the clip invariants, returning self for chaining."""
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("clip contains non-finite samples")
        if len(self.samples) and (self.samples.min() < -1.0 or self.samples.max() > 1.0):
            raise ValueError("clip amplitudes outside [-1, 1]")
        if max_duration_s is not None and self.duration_s > max_duration_s + 1.0 / self.sample_rate:
            raise ValueError(f"clip longer than {max_duration_s} s")
        return self

    def filename(self) -> str:
        offset_ms = int(round(self.offset_s * 1000))
        return f"{self.track_id}__{offset_ms}.wav"


@dataclass
class CropPolicy:
    """Where to cut a clip out of a full track.

    Tracks shorter than ``long_track_threshold_s`` keep their opening
    ``clip_len_s`` seconds (or the whole track). Longer tracks use the
    active interval with probability ``active_probability`` and the opening
    interval otherwise. Draws are keyed by (rng_seed, track_id).
    """

    long_track_threshold_s: float = 60.0
    active_interval: tuple[float, float] = (30.0, 55.0)
    active_probability: float = 0.8
    clip_len_s: float = 25.0
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.active_probability <= 1.0:
            raise ValueError("active_probability must be in [0, 1]")
        start, end = self.active_interval
        if abs((end - start) - self.clip_len_s) > 1e-9:
            raise ValueError("active interval length must equal clip_len_s")


def _per_track_rng(seed: int, track_id: str) -> np.random.Generator:
    digest = hashlib.sha256(f"{seed}:{track_id}".encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def decode_and_normalize(raw_bytes: bytes, target_rate: int, track_id: str = "") -> AudioClip:
    """Decode WAV bytes, collapse to mono, and resample to target_rate.

    Returns a full-track AudioClip (no length cap); feed it to
    :func:`crop_clip` to obtain a pipeline clip.
    """
    if target_rate not in SUPPORTED_TARGET_RATES:
        raise ValueError(f"target_rate must be one of {SUPPORTED_TARGET_RATES}")
    samples, rate = read_wav(raw_bytes)
    out = resample(samples, rate, target_rate)
    np.clip(out, -1.0, 1.0, out=out)
    return AudioClip(track_id=track_id, samples=out, sample_rate=target_rate)


def crop_clip(track: AudioClip, policy: CropPolicy) -> AudioClip:
    """Cut one clip out of a full track according to the policy."""
    duration = track.duration_s
    if len(track.samples) == 0:
        raise EmptyTrackError(f"track {track.track_id!r} is empty")

    if duration < policy.long_track_threshold_s:
        start = 0.0
        length = min(policy.clip_len_s, duration)
    else:
        rng = _per_track_rng(policy.rng_seed, track.track_id)
        active_start, active_end = policy.active_interval
        if rng.random() < policy.active_probability and active_end <= duration:
            start = active_start
            length = active_end - active_start
        else:
            start = 0.0
            length = min(policy.clip_len_s, duration)

    i0 = int(round(start * track.sample_rate))
    i1 = min(i0 + int(round(length * track.sample_rate)), len(track.samples))
    clip = AudioClip(
        track_id=track.track_id,
        samples=track.samples[i0:i1],
        sample_rate=track.sample_rate,
        offset_s=start,
    )
    return clip.validate(max_duration_s=policy.clip_len_s)


def save_clip(clip: AudioClip, directory) -> str:
    """Persist a clip as 16-bit 44.1 kHz WAV; returns the file path."""
    from pathlib import Path

    samples = clip.samples
    rate = clip.sample_rate
    if rate != 44100:
        samples = np.clip(resample(samples, rate, 44100), -1.0, 1.0)
    path = Path(directory) / clip.filename()
    path.write_bytes(write_wav(samples, 44100))
    return str(path)
