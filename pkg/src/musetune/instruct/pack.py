"""Instruction records and dataset packing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .generate import TASK_FAMILIES


@dataclass
class InstructionRecord:
    """One (audio-ref, query, response) training triplet."""

    id: str
    dataset_name: str
    task_family: str
    clip_ref: str
    query: str
    response: str

    def __post_init__(self):
        if self.task_family not in TASK_FAMILIES:
            raise ValueError(f"unknown task family {self.task_family!r}")
        if not self.query or not self.response:
            raise ValueError("query and response must be non-empty")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "dataset_name": self.dataset_name,
            "task_family": self.task_family,
            "clip_ref": self.clip_ref,
            "query": self.query,
            "response": self.response,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "InstructionRecord":
        return cls(**{k: d[k] for k in (
            "id", "dataset_name", "task_family", "clip_ref", "query", "response")})


def pack_dataset(
    records: list[InstructionRecord],
    out_dir,
    shard_size: int = 10_000,
    seed: int = 0,
) -> dict:
    """Write shuffled records into fixed-size JSONL shards plus a manifest.

    The shuffle is a seeded permutation of a stable sort by id, so packing
    the same records with the same seed is byte-identical.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    ordered = sorted(records, key=lambda r: r.id)
    perm = np.random.default_rng(seed).permutation(len(ordered))
    shuffled = [ordered[i] for i in perm]

    shard_names = []
    for start in range(0, len(shuffled), shard_size):
        chunk = shuffled[start:start + shard_size]
        name = f"shard-{start // shard_size:05d}.jsonl"
        lines = [json.dumps(r.to_json_dict(), sort_keys=True, ensure_ascii=False) for r in chunk]
        (out / name).write_text("\n".join(lines) + ("\n" if lines else ""))
        shard_names.append(name)

    counts: dict[str, dict[str, int]] = {}
    for r in records:
        per_task = counts.setdefault(r.dataset_name, {})
        per_task[r.task_family] = per_task.get(r.task_family, 0) + 1

    manifest = {
        "total_records": len(records),
        "shard_size": shard_size,
        "shards": shard_names,
        "seed": seed,
        "counts": {ds: dict(sorted(t.items())) for ds, t in sorted(counts.items())},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return manifest
