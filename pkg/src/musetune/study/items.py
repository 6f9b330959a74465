"""Study items and rater judgments."""

from __future__ import annotations

from dataclasses import dataclass, field

KINDS = ("pairwise_caption", "audio_text_match", "llm_detail")
_OPTIONS_PER_KIND = {"pairwise_caption": 2, "audio_text_match": 3, "llm_detail": 2}

LIKERT_MIN, LIKERT_MAX = 1, 7


@dataclass
class StudyItem:
    """One presentation unit.

    ``answer_key`` stays hidden from raters: for matching items it is the
    index of the true response, for pairwise/judge items the mapping of
    option position to model name. Option order is randomized when the
    item is built and frozen afterwards.
    """

    item_id: str
    kind: str
    audio_ref: str
    prompt: str
    options: list[str]
    answer_key: object
    screening_enabled: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown study kind {self.kind!r}")
        expected = _OPTIONS_PER_KIND[self.kind]
        if len(self.options) != expected:
            raise ValueError(f"{self.kind} items need exactly {expected} options")

    def value_in_domain(self, value) -> bool:
        if self.kind == "pairwise_caption":
            return isinstance(value, int) and LIKERT_MIN <= value <= LIKERT_MAX
        return isinstance(value, int) and 0 <= value < len(self.options)

    def to_view(self) -> dict:
        """Serialization shown to raters: hidden keys stripped."""
        return {
            "item_id": self.item_id,
            "kind": self.kind,
            "audio_ref": self.audio_ref,
            "prompt": self.prompt,
            "options": list(self.options),
            "screening_enabled": self.screening_enabled,
        }

    def to_json_dict(self) -> dict:
        d = self.to_view()
        d["answer_key"] = self.answer_key
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "StudyItem":
        return cls(
            item_id=d["item_id"],
            kind=d["kind"],
            audio_ref=d["audio_ref"],
            prompt=d["prompt"],
            options=list(d["options"]),
            answer_key=d["answer_key"],
            screening_enabled=bool(d.get("screening_enabled", False)),
        )


@dataclass
class Judgment:
    """One recorded rater decision."""

    item_id: str
    rater_id: str
    value: int
    screening_answer: bool | None = None
    timestamp: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "rater_id": self.rater_id,
            "value": self.value,
            "screening_answer": self.screening_answer,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Judgment":
        return cls(
            item_id=d["item_id"],
            rater_id=d["rater_id"],
            value=int(d["value"]),
            screening_answer=d.get("screening_answer"),
            timestamp=float(d.get("timestamp", 0.0)),
        )
