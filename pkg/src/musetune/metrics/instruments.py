"""Instrument-identification F1 over canonicalized label sets.

Free-form predictions are split on commas and conjunctions, scanned for
known instrument names (longest phrase first, so "bass drum" lands on
drums, not bass), and mapped to a canonical vocabulary restricted to
MIDI-protocol instruments. Guitar-like instruments collapse to guitar,
drums collapse to a single label, and vocals stay a distinct label.
"""

from __future__ import annotations

import re
from typing import Iterable

# canonical name -> aliases (the canonical name itself is always an alias)
_CANONICAL_ALIASES: dict[str, list[str]] = {
    "piano": ["piano", "grand piano", "upright piano", "electric piano", "keyboard", "keys"],
    "organ": ["organ", "hammond organ", "church organ", "pipe organ"],
    "accordion": ["accordion"],
    "harmonica": ["harmonica"],
    "guitar": [
        "guitar", "electric guitar", "acoustic guitar", "classical guitar",
        "nylon guitar", "steel guitar", "lap steel guitar", "pedal steel guitar",
        "slide guitar", "rhythm guitar", "lead guitar", "twelve string guitar",
        "12-string guitar", "mandolin", "ukulele",
    ],
    "bass": ["bass", "bass guitar", "electric bass", "synth bass", "upright bass"],
    "contrabass": ["contrabass", "double bass"],
    "violin": ["violin", "fiddle"],
    "viola": ["viola"],
    "cello": ["cello", "violoncello"],
    "harp": ["harp"],
    "strings": ["strings", "string section", "string ensemble"],
    "timpani": ["timpani", "kettle drums"],
    "trumpet": ["trumpet", "cornet"],
    "trombone": ["trombone"],
    "tuba": ["tuba"],
    "french horn": ["french horn"],
    "brass": ["brass", "brass section", "horn section", "horns", "horn"],
    "saxophone": [
        "saxophone", "sax", "alto saxophone", "tenor saxophone",
        "soprano saxophone", "baritone saxophone",
    ],
    "oboe": ["oboe"],
    "english horn": ["english horn"],
    "bassoon": ["bassoon"],
    "clarinet": ["clarinet"],
    "piccolo": ["piccolo"],
    "flute": ["flute"],
    "recorder": ["recorder"],
    "banjo": ["banjo"],
    "sitar": ["sitar"],
    "celesta": ["celesta"],
    "glockenspiel": ["glockenspiel"],
    "vibraphone": ["vibraphone", "vibes"],
    "marimba": ["marimba"],
    "xylophone": ["xylophone"],
    "dulcimer": ["dulcimer"],
    "kalimba": ["kalimba"],
    "bagpipe": ["bagpipe", "bagpipes"],
    "whistle": ["whistle"],
    "ocarina": ["ocarina"],
    "synthesizer": ["synthesizer", "synth", "synth lead", "synth pad", "synths"],
    "drums": [
        "drums", "drum", "drum kit", "drum set", "drum machine", "percussion",
        "snare", "snare drum", "kick drum", "bass drum", "hi-hat", "hihat",
        "cymbal", "cymbals", "toms", "tom-toms", "tambourine", "congas",
        "bongos", "timbales", "shaker", "claps", "handclaps", "beatboxing",
    ],
    "vocals": [
        "vocals", "vocal", "voice", "voices", "singing", "singer",
        "male vocals", "female vocals", "male singer", "female singer",
        "male voice", "female voice", "choir", "rapping", "backing vocals",
        "lead vocals",
    ],
}


def _build_alias_table() -> dict[str, str]:
    table: dict[str, str] = {}
    for canonical, aliases in _CANONICAL_ALIASES.items():
        for alias in aliases:
            table[alias] = canonical
            plural = alias + "s"
            if not alias.endswith("s") and plural not in table:
                table[plural] = canonical
    return table


ALIAS_TO_CANONICAL = _build_alias_table()
_MAX_ALIAS_WORDS = max(len(a.split()) for a in ALIAS_TO_CANONICAL)

_SPLIT_RE = re.compile(r",|;|\n|/|&|\band\b|\bwith\b|\bplus\b", flags=re.IGNORECASE)


def normalize_instruments(text_or_names) -> set[str]:
    """Canonical instrument set from free text or an iterable of names.

    Unknown (non-MIDI) names are dropped.
    """
    if isinstance(text_or_names, str):
        parts = _SPLIT_RE.split(text_or_names)
    else:
        parts = list(text_or_names)

    found: set[str] = set()
    for part in parts:
        words = re.findall(r"[a-z0-9#'-]+", part.lower())
        matched = [False] * len(words)
        for n in range(min(_MAX_ALIAS_WORDS, len(words)), 0, -1):
            for i in range(len(words) - n + 1):
                if any(matched[i:i + n]):
                    continue
                phrase = " ".join(words[i:i + n])
                canonical = ALIAS_TO_CANONICAL.get(phrase)
                if canonical:
                    found.add(canonical)
                    for j in range(i, i + n):
                        matched[j] = True
    return found


def instrument_f1(predicted_text, true_instruments: Iterable[str]) -> float:
    """Set F1 between canonicalized prediction and truth.

    Both sides pass through the same normalization, so only
    MIDI-protocol instruments are scored on either side.
    """
    pred = normalize_instruments(predicted_text)
    truth = normalize_instruments(true_instruments)
    if not pred and not truth:
        return 1.0
    overlap = len(pred & truth)
    denom = len(pred) + len(truth)
    return 2.0 * overlap / denom if denom else 0.0
