from .beats import BeatGrid, beats_from_envelope, track_beats
from .chords import NO_CHORD, ChordSegment, chord_labels, frame_chord_labels, recognize_chords
from .key import PITCH_NAMES, KeyLabel, estimate_key, key_from_chroma
from .metadata import ESTIMATOR_VERSION, AugmentedMetadata, augment_clip
from .tempo import TEMPO_MAX, TEMPO_MIN, estimate_tempo, tempo_from_envelope

__all__ = [
    "AugmentedMetadata",
    "BeatGrid",
    "ChordSegment",
    "ESTIMATOR_VERSION",
    "KeyLabel",
    "NO_CHORD",
    "PITCH_NAMES",
    "TEMPO_MAX",
    "TEMPO_MIN",
    "augment_clip",
    "beats_from_envelope",
    "chord_labels",
    "estimate_key",
    "estimate_tempo",
    "frame_chord_labels",
    "key_from_chroma",
    "recognize_chords",
    "tempo_from_envelope",
    "track_beats",
]
