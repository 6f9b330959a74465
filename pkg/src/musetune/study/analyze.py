"""Judgment analysis for all three study kinds.

Win-rate rule for 7-point pairwise ratings: a rating above the midpoint
favors the second option, below favors the first, and exactly 4 is
excluded. The rule is restated in every report header because the mapping
is a toolkit convention, not a property of the data.
"""

from __future__ import annotations

from collections import defaultdict

from ..errors import OrphanJudgmentError
from .items import Judgment, StudyItem

LIKERT_RULE = "likert >4 favors the second option, <4 the first, ==4 excluded"
SCREENING_RULE = "items where a strict majority of raters answered 'not only music' are excluded"


def analyze(judgments: list[Judgment], items: list[StudyItem]) -> dict:
    """Pure fold over judgments: the report is order-independent."""
    by_id = {item.item_id: item for item in items}
    for j in judgments:
        if j.item_id not in by_id:
            raise OrphanJudgmentError(f"judgment references unknown item {j.item_id!r}")

    report: dict = {"rules": {"pairwise": LIKERT_RULE, "screening": SCREENING_RULE}}

    # Screening: per-item majority vote over raters that answered it.
    screened_out: set[str] = set()
    votes: dict[str, list[bool]] = defaultdict(list)
    for j in judgments:
        if j.screening_answer is not None and by_id[j.item_id].screening_enabled:
            votes[j.item_id].append(bool(j.screening_answer))
    for item_id, answers in votes.items():
        not_music = sum(1 for a in answers if not a)
        if not_music * 2 > len(answers):
            screened_out.add(item_id)

    pairwise = [j for j in judgments if by_id[j.item_id].kind == "pairwise_caption"
                and j.item_id not in screened_out]
    matching = [j for j in judgments if by_id[j.item_id].kind == "audio_text_match"]
    detail = [j for j in judgments if by_id[j.item_id].kind == "llm_detail"]

    if any(by_id[j.item_id].kind == "pairwise_caption" for j in judgments):
        report["pairwise"] = _analyze_pairwise(pairwise, by_id, screened_out)
    if matching:
        report["matching"] = _analyze_matching(matching, by_id)
    if detail:
        report["judge"] = _analyze_detail(detail, by_id)
    return report


def _favored_slot(likert: int) -> str | None:
    if likert > 4:
        return "second"
    if likert < 4:
        return "first"
    return None


def _analyze_pairwise(judgments, by_id, screened_out) -> dict:
    wins: dict[str, int] = defaultdict(int)
    losses: dict[str, int] = defaultdict(int)
    midpoints = 0
    for j in judgments:
        slot = _favored_slot(j.value)
        if slot is None:
            midpoints += 1
            continue
        key = by_id[j.item_id].answer_key
        winner = key[slot]
        loser = key["second" if slot == "first" else "first"]
        wins[winner] += 1
        losses[loser] += 1

    models = sorted(set(wins) | set(losses))
    decisions = sum(wins.values())
    result = {
        "n_judgments": len(judgments),
        "n_decisions": decisions,
        "n_midpoint_excluded": midpoints,
        "n_items_screened_out": len(screened_out),
        "zero_effective_sample": decisions == 0,
        "win_rates": {},
    }
    for m in models:
        total = wins[m] + losses[m]
        result["win_rates"][m] = {
            "wins": wins[m],
            "losses": losses[m],
            "rate": wins[m] / total if total else 0.0,
        }
    return result


def _analyze_matching(judgments, by_id) -> dict:
    per_prompt: dict[str, list[bool]] = defaultdict(list)
    for j in judgments:
        item = by_id[j.item_id]
        per_prompt[item.prompt].append(j.value == item.answer_key)
    overall = [v for values in per_prompt.values() for v in values]
    return {
        "n_judgments": len(overall),
        "chance_level": 1.0 / 3.0,
        "overall_accuracy": sum(overall) / len(overall) if overall else 0.0,
        "per_prompt_accuracy": {
            prompt: sum(v) / len(v) for prompt, v in sorted(per_prompt.items())
        },
    }


def _analyze_detail(judgments, by_id) -> dict:
    wins: dict[str, int] = defaultdict(int)
    losses: dict[str, int] = defaultdict(int)
    ties = 0
    for j in judgments:
        item = by_id[j.item_id]
        if item.options[0] == item.options[1]:
            ties += 1
            continue
        slot = "first" if j.value == 0 else "second"
        winner = item.answer_key[slot]
        loser = item.answer_key["second" if slot == "first" else "first"]
        wins[winner] += 1
        losses[loser] += 1
    models = sorted(set(wins) | set(losses))
    return {
        "n_judgments": len(judgments),
        "n_tie_eligible": ties,
        "win_rates": {
            m: {
                "wins": wins[m],
                "losses": losses[m],
                "rate": wins[m] / (wins[m] + losses[m]) if wins[m] + losses[m] else 0.0,
            }
            for m in models
        },
    }
