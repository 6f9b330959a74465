"""Assemble the per-clip metadata document fed to the generator."""

from __future__ import annotations

import json

from ..corpus import TrackRecord
from ..mir import AugmentedMetadata

# Names the augmentation owns; native keys colliding with them (including
# the unitless spelling of the tempo field) are kept under a "native."
# namespace instead of being clobbered.
_AUGMENTED_FIELDS = {"tempo_bpm", "key", "beats", "chords"}
_COLLISION_TO_FIELD = {
    "tempo": "tempo_bpm",
    "tempo_bpm": "tempo_bpm",
    "key": "key",
    "beats": "beats",
    "chords": "chords",
}


def build_metadata_doc(record: TrackRecord, aug: AugmentedMetadata) -> str:
    """Serialize native + augmented metadata as JSON with sorted keys."""
    aug_fields = aug.to_doc_fields()
    doc: dict = {}
    namespaced_aug: set[str] = set()

    for key, value in record.annotations.items():
        if key in _COLLISION_TO_FIELD:
            doc[f"native.{key}"] = value
            namespaced_aug.add(_COLLISION_TO_FIELD[key])
        else:
            doc[key] = value

    for field_name, value in aug_fields.items():
        if field_name in namespaced_aug:
            doc[f"augmented.{field_name}"] = value
        else:
            doc[field_name] = value

    return json.dumps(doc, sort_keys=True, ensure_ascii=False)
