"""Dispatch detail-comparison items through a chat-completion judge."""

from __future__ import annotations

import logging

from ..instruct import ChatClient
from .items import Judgment, StudyItem

log = logging.getLogger("musetune.study")

JUDGE_SYSTEM_PROMPT = (
    "You compare two responses to the same question about a piece of music "
    "and decide which one contains more musical detail: concrete statements "
    "about tempo, key, harmony, rhythm, instrumentation, or structure. "
    "Answer with the single letter A or B and nothing else."
)


def run_llm_judge(
    items: list[StudyItem],
    client: ChatClient,
    model: str,
    rater_id: str = "llm-judge",
) -> list[Judgment]:
    """Ask the judge model to pick the more detailed option per item."""
    judgments = []
    for item in items:
        user = (
            f"Question: {item.prompt}\n\n"
            f"Response A:\n{item.options[0]}\n\n"
            f"Response B:\n{item.options[1]}"
        )
        reply = client.complete(model=model, system=JUDGE_SYSTEM_PROMPT, user=user).strip()
        letter = reply[:1].upper()
        if letter not in ("A", "B"):
            log.warning("judge reply %r for %s not A/B; skipped", reply[:40], item.item_id)
            continue
        judgments.append(Judgment(
            item_id=item.item_id,
            rater_id=rater_id,
            value=0 if letter == "A" else 1,
        ))
    return judgments
