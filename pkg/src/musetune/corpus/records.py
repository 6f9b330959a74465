"""Uniform track records and per-corpus bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class TrackRecord:
    """One track with its native annotations mapped into an open document.

    Unknown annotation fields are preserved verbatim; adapters only
    normalize the fields the prompts use.
    """

    track_id: str
    dataset_name: str
    audio_path: str
    annotations: dict = field(default_factory=dict)
    split: str = "train"

    def to_json_dict(self) -> dict:
        return {
            "track_id": self.track_id,
            "dataset_name": self.dataset_name,
            "audio_path": self.audio_path,
            "annotations": self.annotations,
            "split": self.split,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TrackRecord":
        return cls(
            track_id=d["track_id"],
            dataset_name=d["dataset_name"],
            audio_path=d["audio_path"],
            annotations=d.get("annotations", {}),
            split=d.get("split", "train"),
        )


@dataclass
class CorpusManifest:
    """Instruction-pair counts for one dataset, keyed by (split, task)."""

    dataset_name: str
    counts: dict = field(default_factory=dict)  # {split: {task_family: count}}
    adapter_flags: dict = field(default_factory=dict)

    def __post_init__(self):
        for split, per_task in self.counts.items():
            for task, n in per_task.items():
                if n < 0:
                    raise ValueError(f"negative count for ({split}, {task})")

    def total(self, split: str | None = None) -> int:
        splits = [split] if split else list(self.counts)
        return sum(sum(self.counts.get(s, {}).values()) for s in splits)
