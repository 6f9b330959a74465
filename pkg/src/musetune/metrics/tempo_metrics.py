"""Tempo-estimation scoring with octave tolerance."""

from __future__ import annotations

import re

from ..errors import KeyParseError

# Multiples of the true tempo accepted by the metric (octave errors by
# factors of 2 or 3).
ACC2_MULTIPLES = (1.0 / 3.0, 0.5, 1.0, 2.0, 3.0)
ACC2_TOLERANCE = 0.04


def acc2(estimated_bpm: float, reference_bpm: float) -> bool:
    """True iff the estimate is within 4% of {1/3, 1/2, 1, 2, 3} x truth.

    The boundary is inclusive: 124.8 vs 120 counts as correct.
    """
    if reference_bpm <= 0:
        raise ValueError("reference tempo must be positive")
    return any(
        abs(estimated_bpm - m * reference_bpm) <= ACC2_TOLERANCE * m * reference_bpm
        for m in ACC2_MULTIPLES
    )


_NUMBER_RE = re.compile(r"(\d+(?:\.\d+)?)")


def parse_bpm_text(text: str) -> float:
    """First numeric token in a free-form tempo answer.

    Digits-only: spelled-out numbers ("around ninety") raise and the item
    is flagged incorrect.
    """
    match = _NUMBER_RE.search(text)
    if not match:
        raise KeyParseError(f"no numeric tempo in {text!r}")
    return float(match.group(1))
