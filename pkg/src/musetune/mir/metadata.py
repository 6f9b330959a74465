"""Bundle the four estimated music features for one clip."""

from __future__ import annotations

from dataclasses import dataclass

from ..audio import AudioClip
from .beats import BeatGrid, track_beats
from .chords import ChordSegment, recognize_chords
from .key import KeyLabel, estimate_key
from .tempo import estimate_tempo

ESTIMATOR_VERSION = "musetune-mir-0.1"


@dataclass
class AugmentedMetadata:
    tempo_bpm: float
    key: KeyLabel
    beat_grid: BeatGrid
    chords: list[ChordSegment]
    estimator_version: str = ESTIMATOR_VERSION

    def __post_init__(self):
        if not 40.0 <= self.tempo_bpm <= 300.0:
            raise ValueError("tempo_bpm must be in [40, 300]")

    def to_doc_fields(self) -> dict:
        """The augmentation fields of the metadata document."""
        return {
            "tempo_bpm": round(self.tempo_bpm, 2),
            "key": self.key.name,
            "beats": [[round(t, 4), n] for t, n in self.beat_grid.beats],
            "chords": [
                [round(c.start_s, 4), round(c.end_s, 4), c.label] for c in self.chords
            ],
        }


def augment_clip(clip: AudioClip) -> AugmentedMetadata:
    """Run all four estimators on a clip."""
    tempo = estimate_tempo(clip)
    return AugmentedMetadata(
        tempo_bpm=tempo,
        key=estimate_key(clip),
        beat_grid=track_beats(clip, tempo),
        chords=recognize_chords(clip),
    )
