"""Aggregate instruction-pair counts across corpus manifests."""

from __future__ import annotations

from typing import Iterable

from .records import CorpusManifest


def tally(manifests: Iterable[CorpusManifest]) -> dict:
    """Per-split totals and per-task percentages over all manifests."""
    totals: dict[str, dict[str, int]] = {}
    for manifest in manifests:
        for split, per_task in manifest.counts.items():
            bucket = totals.setdefault(split, {})
            for task, n in per_task.items():
                bucket[task] = bucket.get(task, 0) + n

    report = {"splits": {}, "grand_total": 0}
    for split, per_task in sorted(totals.items()):
        split_total = sum(per_task.values())
        report["splits"][split] = {
            "per_task": dict(sorted(per_task.items())),
            "total": split_total,
            "per_task_pct": {
                task: (n / split_total if split_total else 0.0)
                for task, n in sorted(per_task.items())
            },
        }
        report["grand_total"] += split_total
    return report
