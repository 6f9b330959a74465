"""Key-estimation scoring: graded credit by harmonic relationship."""

from __future__ import annotations

import re

from ..errors import KeyParseError
from ..mir import KeyLabel

# Accidental spellings folded to sharps; letters map to pitch classes.
_LETTER_PC = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

# The trailing lookahead stops mid-word capitals ("BPM", "EQ") from
# matching as bare tonics.
_TONIC_RE = re.compile(
    r"\b([A-G])([#♯]|b(?![a-z])|♭)?(?:\s*(major|minor|maj|min|m)\b)?(?![A-Za-z0-9])",
)


def mirex_key_score(estimated: KeyLabel, reference: KeyLabel) -> float:
    """Graded key credit.

    1.0 same key and mode; 0.5 estimate a perfect fifth above the
    reference (same mode); 0.3 relative major/minor; 0.2 parallel
    major/minor; 0.0 otherwise.
    """
    if estimated == reference:
        return 1.0
    if estimated.mode == reference.mode and estimated.tonic == (reference.tonic + 7) % 12:
        return 0.5
    if reference.mode == "major" and estimated.mode == "minor" \
            and estimated.tonic == (reference.tonic + 9) % 12:
        return 0.3
    if reference.mode == "minor" and estimated.mode == "major" \
            and estimated.tonic == (reference.tonic + 3) % 12:
        return 0.3
    if estimated.tonic == reference.tonic and estimated.mode != reference.mode:
        return 0.2
    return 0.0


def parse_key_text(text: str) -> KeyLabel:
    """Pull a key out of free-form model output.

    The first tonic token (uppercase letter A-G plus optional accidental)
    wins; flats fold to their sharp equivalents. The mode defaults to
    major when no mode word appears.

    Raises KeyParseError when no tonic is found; callers score such items
    0.0 and flag them.
    """
    match = _TONIC_RE.search(text)
    if not match:
        raise KeyParseError(f"no tonic found in {text!r}")
    letter, accidental, inline_mode = match.groups()
    pc = _LETTER_PC[letter]
    if accidental in ("#", "♯"):
        pc = (pc + 1) % 12
    elif accidental in ("b", "♭"):
        pc = (pc - 1) % 12

    mode = "major"
    if inline_mode and inline_mode.lower() in ("minor", "min", "m"):
        mode = "minor"
    elif not inline_mode:
        rest = text[match.end():]
        mode_word = re.search(r"\b(major|minor|maj|min)\b", rest, flags=re.IGNORECASE)
        if mode_word and mode_word.group(1).lower() in ("minor", "min"):
            mode = "minor"
    return KeyLabel(tonic=pc, mode=mode)
