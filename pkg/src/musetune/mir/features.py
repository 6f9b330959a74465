"""Shared spectral features for the music-feature estimators.

All estimators analyze audio at a fixed internal rate with one STFT
configuration so their outputs line up on the same frame grid.
"""

from __future__ import annotations

import numpy as np

from ..audio import AudioClip, resample

INTERNAL_RATE = 22050
N_FFT = 2048
HOP = 512

FRAME_RATE = INTERNAL_RATE / HOP

# Chroma uses a longer window on the same hop grid: below ~300 Hz the
# 2048-sample window's bin spacing exceeds a semitone, which splits
# between-bin notes across pitch-class boundaries.
CHROMA_N_FFT = 8192
CHROMA_FMIN = 55.0
CHROMA_FMAX = 2000.0


def to_internal_rate(clip: AudioClip) -> np.ndarray:
    """Return the clip's samples resampled to the internal analysis rate."""
    if clip.sample_rate == INTERNAL_RATE:
        return np.asarray(clip.samples, dtype=np.float64)
    return resample(clip.samples, clip.sample_rate, INTERNAL_RATE)


def stft_magnitude(samples: np.ndarray, n_fft: int = N_FFT, hop: int = HOP) -> np.ndarray:
    """Centered magnitude STFT, shape (frames, n_fft // 2 + 1).

    Frame t is centered on sample t * hop, so frame times are t * hop / sr.
    """
    x = np.asarray(samples, dtype=np.float64)
    pad = n_fft // 2
    x = np.pad(x, (pad, pad))
    n_frames = 1 + (len(x) - n_fft) // hop
    if n_frames < 1:
        return np.zeros((0, n_fft // 2 + 1))
    idx = np.arange(n_fft)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = x[idx] * np.hanning(n_fft)[None, :]
    return np.abs(np.fft.rfft(frames, axis=1))


def onset_envelope(samples: np.ndarray) -> np.ndarray:
    """Spectral-flux onset strength, one value per STFT frame.

    Half-wave rectified frame-to-frame increase of the log-compressed
    magnitude spectrum, summed over frequency.
    """
    mag = stft_magnitude(samples)
    if len(mag) == 0:
        return np.zeros(0)
    logmag = np.log1p(1000.0 * mag)
    flux = np.diff(logmag, axis=0)
    np.maximum(flux, 0.0, out=flux)
    env = np.zeros(len(mag))
    env[1:] = flux.sum(axis=1)
    return env


def frame_times(n_frames: int) -> np.ndarray:
    return np.arange(n_frames) * (HOP / INTERNAL_RATE)


def chroma_frames(samples: np.ndarray) -> np.ndarray:
    """Per-frame 12-bin chroma, shape (frames, 12).

    Each STFT bin inside the chroma band contributes its power to the
    pitch class nearest its center frequency. Power (not magnitude) keeps
    the fold register-balanced: the spread of a note's main lobe across
    semitone boundaries grows toward low frequencies, but its peak bins
    dominate in power.
    """
    mag = stft_magnitude(samples, n_fft=CHROMA_N_FFT)
    freqs = np.fft.rfftfreq(CHROMA_N_FFT, d=1.0 / INTERNAL_RATE)
    band = (freqs >= CHROMA_FMIN) & (freqs <= CHROMA_FMAX)
    midi = 69.0 + 12.0 * np.log2(freqs[band] / 440.0)
    pcs = np.mod(np.round(midi).astype(int), 12)
    chroma = np.zeros((len(mag), 12))
    power = mag[:, band] ** 2
    for pc in range(12):
        sel = pcs == pc
        if sel.any():
            chroma[:, pc] = power[:, sel].sum(axis=1)
    return chroma
