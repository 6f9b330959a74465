"""Persistent study store backed by an append-only judgment log.

Studies are JSON files; judgments append to one JSONL log whose replay
reconstructs the exact store state after a crash. All writes funnel
through one lock, which is the store's serialization point.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from pathlib import Path

from ..errors import (
    DomainError,
    DuplicateJudgmentError,
    UnknownStudyError,
    ValidationError,
)
from ..study import Judgment, StudyItem, analyze


class StudyStore:
    def __init__(self, log_path, studies_dir=None):
        self.log_path = Path(log_path)
        self.studies_dir = Path(studies_dir) if studies_dir else self.log_path.parent / "studies"
        self.studies_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._studies: dict[str, list[StudyItem]] = {}
        self._judged: dict[str, set[tuple[str, str]]] = {}
        self._judgments: dict[str, list[Judgment]] = {}
        self._replay()

    # -- persistence

    def _replay(self):
        for path in sorted(self.studies_dir.glob("*.json")):
            study_id = path.stem
            items = [StudyItem.from_json_dict(d) for d in json.loads(path.read_text())]
            self._studies[study_id] = items
            self._judged[study_id] = set()
            self._judgments[study_id] = []
        if self.log_path.exists():
            with open(self.log_path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    study_id = entry.pop("study_id")
                    judgment = Judgment.from_json_dict(entry)
                    if study_id in self._studies:
                        self._judgments[study_id].append(judgment)
                        self._judged[study_id].add((judgment.rater_id, judgment.item_id))

    def _append_log(self, study_id: str, judgment: Judgment):
        entry = {"study_id": study_id, **judgment.to_json_dict()}
        with open(self.log_path, "a") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
            fh.flush()

    # -- operations

    def upload_study(self, definition: list[dict] | list[StudyItem]) -> str:
        items = [
            item if isinstance(item, StudyItem) else StudyItem.from_json_dict(item)
            for item in definition
        ]
        if not items:
            raise ValidationError("study has no items")
        ids = [item.item_id for item in items]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate item_ids in study definition")

        study_id = uuid.uuid4().hex[:12]
        with self._lock:
            path = self.studies_dir / f"{study_id}.json"
            path.write_text(json.dumps([i.to_json_dict() for i in items], indent=2))
            self._studies[study_id] = items
            self._judged[study_id] = set()
            self._judgments[study_id] = []
        return study_id

    def next_item(self, study_id: str, rater_id: str) -> dict | None:
        """Lowest-index item this rater has not judged; None when done."""
        items = self._require(study_id)
        judged = self._judged[study_id]
        for item in items:
            if (rater_id, item.item_id) not in judged:
                return item.to_view()
        return None

    def submit_judgment(self, study_id: str, judgment: Judgment) -> dict:
        items = self._require(study_id)
        by_id = {i.item_id: i for i in items}
        item = by_id.get(judgment.item_id)
        if item is None:
            raise DomainError(f"unknown item {judgment.item_id!r}")
        if not item.value_in_domain(judgment.value):
            raise DomainError(
                f"value {judgment.value!r} outside the domain of kind {item.kind}"
            )
        with self._lock:
            if (judgment.rater_id, judgment.item_id) in self._judged[study_id]:
                raise DuplicateJudgmentError(
                    f"rater {judgment.rater_id!r} already judged {judgment.item_id!r}"
                )
            judgment.timestamp = time.time()
            self._append_log(study_id, judgment)  # durable before ack
            self._judgments[study_id].append(judgment)
            self._judged[study_id].add((judgment.rater_id, judgment.item_id))
        return {"ok": True, "item_id": judgment.item_id}

    def results(self, study_id: str) -> dict:
        items = self._require(study_id)
        return analyze(self._judgments[study_id], items)

    def judgments(self, study_id: str) -> list[Judgment]:
        self._require(study_id)
        return list(self._judgments[study_id])

    def _require(self, study_id: str) -> list[StudyItem]:
        if study_id not in self._studies:
            raise UnknownStudyError(f"no study {study_id!r}")
        return self._studies[study_id]
