import numpy as np
import pytest

SR = 22050


def click_track(period_s: float, dur_s: float, sr: int = SR) -> np.ndarray:
    """Unit impulses every period_s seconds."""
    x = np.zeros(int(sr * dur_s))
    x[:: int(round(sr * period_s))] = 1.0
    return x


def triad(midis, dur_s: float, sr: int = SR) -> np.ndarray:
    """Equal-amplitude sine mixture at the given MIDI pitches."""
    t = np.arange(int(sr * dur_s)) / sr
    sig = sum(np.sin(2 * np.pi * 440.0 * 2 ** ((m - 69) / 12) * t) for m in midis)
    return sig / np.abs(sig).max()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
