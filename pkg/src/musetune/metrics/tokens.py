"""Word/punctuation tokenization and corpus token statistics."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

import numpy as np

# Maximal runs of word characters or of punctuation characters, applied
# after lowercasing ("Hello, world!" -> [hello, ",", world, "!"]).
_TOKEN_RE = re.compile(r"\w+|[^\w\s]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def token_stats(texts: Iterable[str]) -> dict:
    """Unique-token count over the whole corpus and mean tokens per text."""
    texts = list(texts)
    if not texts:
        return {"unique_tokens": 0, "mean_token_len": 0.0}
    per_text = [tokenize(t) for t in texts]
    unique = set()
    for tokens in per_text:
        unique.update(tokens)
    return {
        "unique_tokens": len(unique),
        "mean_token_len": float(np.mean([len(t) for t in per_text])),
    }


def word_count_probe(outputs_by_prompt: dict[str, Sequence[str]]) -> dict:
    """Response-length distribution per detail-level prompt.

    For each prompt group: mean and SD of token counts plus the fraction
    of responses that are exactly one token long.
    """
    report = {}
    for prompt, outputs in outputs_by_prompt.items():
        counts = [len(tokenize(o)) for o in outputs]
        if counts:
            report[prompt] = {
                "n": len(counts),
                "mean_words": float(np.mean(counts)),
                "sd_words": float(np.std(counts)),
                "one_word_fraction": float(np.mean([c == 1 for c in counts])),
            }
        else:
            report[prompt] = {"n": 0, "mean_words": 0.0, "sd_words": 0.0,
                              "one_word_fraction": 0.0}
    return report


# The three detail-level prompts used by the instruction-following probe.
PROBE_PROMPTS = {
    "one_word": "Describe the provided audio in one word",
    "short": "Give a short summary of the provided audio",
    "detailed": "Describe the contents of the provided audio in detail",
}
