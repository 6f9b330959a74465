"""Chord recognition: triad template matching smoothed by a path decoder."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..audio import AudioClip
from ..errors import InsufficientAudioError
from .features import HOP, INTERNAL_RATE, chroma_frames, to_internal_rate

NO_CHORD = "N"
MIN_CLIP_SECONDS = 2.0
SELF_TRANSITION = 0.9
# Frames whose chroma energy falls below this fraction of the strongest
# frame are labeled "N".
ENERGY_FLOOR_REL = 1e-3


@dataclass(frozen=True)
class ChordSegment:
    """One chord span; label is "{pitch_class}:{maj|min}" or "N"."""

    start_s: float
    end_s: float
    label: str

    def __post_init__(self):
        if self.start_s >= self.end_s:
            raise ValueError("segment must have positive length")


def chord_labels() -> list[str]:
    """The 24 triad labels, major triads first."""
    return [f"{pc}:maj" for pc in range(12)] + [f"{pc}:min" for pc in range(12)]


def _templates() -> np.ndarray:
    t = np.zeros((24, 12))
    for pc in range(12):
        for interval in (0, 4, 7):
            t[pc, (pc + interval) % 12] = 1.0
        for interval in (0, 3, 7):
            t[12 + pc, (pc + interval) % 12] = 1.0
    return t / np.linalg.norm(t, axis=1, keepdims=True)


TEMPLATES = _templates()


def recognize_chords(
    clip: AudioClip, self_transition: float = SELF_TRANSITION
) -> list[ChordSegment]:
    """Segment a clip into timestamped triads.

    Per-frame chroma is scored against the 24 binary triad templates and
    decoded with a self-transition-biased Viterbi path (``self_transition``
    is the single smoothing knob); low-energy frames are forced to "N".
    Segments tile [0, duration) exactly.
    """
    if clip.duration_s < MIN_CLIP_SECONDS:
        raise InsufficientAudioError(
            f"chords need >= {MIN_CLIP_SECONDS} s, got {clip.duration_s:.2f} s"
        )
    chroma = chroma_frames(to_internal_rate(clip))
    labels = frame_chord_labels(chroma, self_transition=self_transition)
    return _merge_frames(labels, clip.duration_s)


def frame_chord_labels(
    chroma: np.ndarray, self_transition: float = SELF_TRANSITION
) -> list[str]:
    """Per-frame chord labels for a (frames, 12) chroma matrix."""
    n = len(chroma)
    if n == 0:
        return []
    energy = chroma.sum(axis=1)
    silent = energy < ENERGY_FLOOR_REL * max(energy.max(), 1e-12)
    if silent.all():
        return [NO_CHORD] * n

    norms = np.linalg.norm(chroma, axis=1, keepdims=True)
    unit = np.divide(chroma, norms, out=np.zeros_like(chroma), where=norms > 0)
    scores = unit @ TEMPLATES.T  # (frames, 24) cosine similarities
    states = _viterbi(scores, self_transition)

    names = chord_labels()
    return [NO_CHORD if silent[i] else names[states[i]] for i in range(n)]


def _viterbi(scores: np.ndarray, self_transition: float) -> np.ndarray:
    """Max-probability state path under a self-transition-biased chain."""
    if not 0.0 < self_transition < 1.0:
        raise ValueError("self_transition must be in (0, 1)")
    n, k = scores.shape
    emit = np.log(np.maximum(scores, 1e-9))
    stay = np.log(self_transition)
    switch = np.log((1.0 - self_transition) / (k - 1))

    delta = emit[0].copy()
    back = np.zeros((n, k), dtype=np.int64)
    states = np.arange(k)
    for i in range(1, n):
        # Uniform off-diagonal transitions: the best switch-in source is
        # the global top scorer, except for that state itself, which must
        # use the runner-up.
        move = delta + switch
        top2 = np.argpartition(move, k - 2)[-2:]
        first, second = (top2[1], top2[0]) if move[top2[1]] >= move[top2[0]] \
            else (top2[0], top2[1])
        switch_score = np.full(k, move[first])
        switch_from = np.full(k, first)
        switch_score[first] = move[second]
        switch_from[first] = second
        cand_stay = delta + stay
        use_stay = cand_stay >= switch_score
        delta = np.where(use_stay, cand_stay, switch_score) + emit[i]
        back[i] = np.where(use_stay, states, switch_from)

    path = np.zeros(n, dtype=np.int64)
    path[-1] = int(np.argmax(delta))
    for i in range(n - 1, 0, -1):
        path[i - 1] = back[i, path[i]]
    return path


def _merge_frames(labels: list[str], duration_s: float) -> list[ChordSegment]:
    hop_s = HOP / INTERNAL_RATE
    segments: list[ChordSegment] = []
    start = 0.0
    for i in range(1, len(labels) + 1):
        if i == len(labels) or labels[i] != labels[i - 1]:
            end = duration_s if i == len(labels) else i * hop_s
            segments.append(ChordSegment(start_s=start, end_s=end, label=labels[i - 1]))
            start = end
    if not segments:
        segments.append(ChordSegment(0.0, duration_s, NO_CHORD))
    return segments
