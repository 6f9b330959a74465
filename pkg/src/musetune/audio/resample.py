"""Sample-rate conversion via polyphase windowed-sinc filtering."""

from __future__ import annotations

from math import gcd

import numpy as np
from scipy.signal import resample_poly

# Kaiser beta for >= 80 dB stopband attenuation: 0.1102 * (80 - 8.7).
_KAISER_BETA = 7.857


def resample(samples: np.ndarray, rate_in: int, rate_out: int) -> np.ndarray:
    """Resample a 1-D signal from rate_in to rate_out."""
    if rate_in == rate_out:
        return np.asarray(samples, dtype=np.float64)
    g = gcd(int(rate_in), int(rate_out))
    up = rate_out // g
    down = rate_in // g
    out = resample_poly(
        np.asarray(samples, dtype=np.float64), up, down,
        window=("kaiser", _KAISER_BETA),
    )
    return out
