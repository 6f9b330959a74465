"""Post-generation Q/A filtering by disallowed substrings.

Generated pairs that leak prompt metadata or dodge the question get
dropped. Matching is case-insensitive substring containment; the rejection
reason names the longest phrase found so the most specific rule wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Phrases whose presence in a QUERY rejects the pair.
DEFAULT_QUERY_PHRASES = [
    "what is the composer",
    "who is the composer",
    "tell me about the composer",
    "name of the composer",
    "who is the artist",
    "tell me about the artist",
    "what tags are associated with the artist",
    "what are the tags associated with the artist",
    "is there any information available about the album",
    "about the album",
    "name of the artist",
    "what is the name",
    "what is the movement",
    "what is the specific movement",
    "what is the title",
    "which movement is",
    "what is the length of this clip",
    "duration",
    "pack",
]

# Phrases whose presence in a RESPONSE rejects the pair.
DEFAULT_RESPONSE_PHRASES = [
    "metadata",
    "is not provided",
    "based on the provided metadata",
    "based on the provided beat",
    "based on the provided chord",
    "based on the provided information",
    "based on the provided annotations",
    "no specific mood",
    "there is no mention of",
    "there is no specific mention of any",
    "As an AI assistant, I am unable to",
    "As an AI assistant, I do not",
    "it is difficult to determine",
    "it is not possible to determine",
    "no information is available about the album",
    "cannot determine",
    "violin 1",
    "violin 2",
    "violin 3",
    "viola 1",
    "viola 2",
    "viola 3",
    "pack",
]


@dataclass
class FilterList:
    query_phrases: list[str] = field(default_factory=lambda: list(DEFAULT_QUERY_PHRASES))
    response_phrases: list[str] = field(default_factory=lambda: list(DEFAULT_RESPONSE_PHRASES))

    def __post_init__(self):
        if not self.query_phrases or not self.response_phrases:
            raise ValueError("filter lists must be non-empty")

    @classmethod
    def from_json_dict(cls, d: dict) -> "FilterList":
        return cls(
            query_phrases=list(d["query_phrases"]),
            response_phrases=list(d["response_phrases"]),
        )

    def to_json_dict(self) -> dict:
        return {
            "query_phrases": self.query_phrases,
            "response_phrases": self.response_phrases,
        }


def _first_match(text: str, phrases: list[str]) -> str | None:
    folded = text.casefold()
    for phrase in sorted(phrases, key=len, reverse=True):
        if phrase.casefold() in folded:
            return phrase
    return None


def filter_pairs(
    pairs: list[tuple[str, str]], filters: FilterList | None = None
) -> tuple[list[tuple[str, str]], list[tuple[tuple[str, str], str]]]:
    """Split pairs into (kept, rejected-with-reason).

    A pair is rejected iff its query contains a query phrase or its
    response contains a response phrase; the reason string names the
    matched phrase and which side it hit.
    """
    filters = filters or FilterList()
    kept: list[tuple[str, str]] = []
    rejected: list[tuple[tuple[str, str], str]] = []
    for query, response in pairs:
        hit = _first_match(query, filters.query_phrases)
        if hit is not None:
            rejected.append(((query, response), f"query contains {hit!r}"))
            continue
        hit = _first_match(response, filters.response_phrases)
        if hit is not None:
            rejected.append(((query, response), f"response contains {hit!r}"))
            continue
        kept.append((query, response))
    return kept, rejected
