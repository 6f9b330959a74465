"""Study construction: pairwise caption comparison, audio-text matching,
and judge-model detail comparison."""

from __future__ import annotations

import numpy as np

from ..errors import InsufficientOutputsError
from .items import StudyItem


def build_pairwise_study(
    outputs_by_model: dict[str, dict[str, str]],
    subject_model: str,
    n_pairs: int,
    seed: int = 0,
    screening: bool = False,
) -> list[StudyItem]:
    """Sample pairwise caption comparisons of the subject vs baselines.

    Each item pairs the subject's output on a clip with a uniformly chosen
    baseline's output on the same clip, in randomized order; the hidden
    key records which model sits in which slot. ``screening`` attaches the
    only-music screening question (for corpora with non-musical clips).
    """
    if subject_model not in outputs_by_model:
        raise InsufficientOutputsError(f"no outputs for subject {subject_model!r}")
    baselines = [m for m in sorted(outputs_by_model) if m != subject_model]
    if not baselines:
        raise InsufficientOutputsError("need at least one baseline model")

    subject_outputs = outputs_by_model[subject_model]
    combos = [
        (clip, baseline)
        for baseline in baselines
        for clip in sorted(subject_outputs)
        if clip in outputs_by_model[baseline]
    ]
    if n_pairs > len(combos):
        raise InsufficientOutputsError(
            f"requested {n_pairs} pairs but only {len(combos)} clip/baseline combos exist"
        )

    rng = np.random.default_rng(seed)
    chosen = [combos[i] for i in rng.choice(len(combos), size=n_pairs, replace=False)]

    items = []
    for i, (clip, baseline) in enumerate(chosen):
        first, second = subject_model, baseline
        if rng.random() < 0.5:
            first, second = second, first
        items.append(StudyItem(
            item_id=f"pw-{i:05d}",
            kind="pairwise_caption",
            audio_ref=clip,
            prompt="Which option is better overall (completely describing "
                   "the music while also being accurate)?",
            options=[outputs_by_model[first][clip], outputs_by_model[second][clip]],
            answer_key={"first": first, "second": second},
            screening_enabled=screening,
        ))
    return items


def build_matching_study(
    outputs: dict[tuple[str, str, str], str],
    seed: int = 0,
) -> list[StudyItem]:
    """Audio-text matching items from outputs keyed by (model, prompt, audio).

    Every output becomes an item holding the true response plus two
    distractor responses from the same model and prompt but different
    audio; the hidden key is the true option's index after shuffling.
    """
    by_group: dict[tuple[str, str], list[str]] = {}
    for (model, prompt, audio) in outputs:
        by_group.setdefault((model, prompt), []).append(audio)

    rng = np.random.default_rng(seed)
    items = []
    i = 0
    for (model, prompt) in sorted(by_group):
        audios = sorted(by_group[(model, prompt)])
        if len(audios) < 3:
            raise InsufficientOutputsError(
                f"(model={model!r}, prompt={prompt!r}) has {len(audios)} clips; need >= 3"
            )
        for audio in audios:
            others = [a for a in audios if a != audio]
            picks = rng.choice(len(others), size=2, replace=False)
            distractors = [outputs[(model, prompt, others[j])] for j in picks]
            option_texts = [outputs[(model, prompt, audio)], *distractors]
            order = rng.permutation(3)
            options = [option_texts[j] for j in order]
            true_index = int(np.flatnonzero(order == 0)[0])
            items.append(StudyItem(
                item_id=f"mt-{i:05d}",
                kind="audio_text_match",
                audio_ref=audio,
                prompt=prompt,
                options=options,
                answer_key=true_index,
            ))
            i += 1
    return items


def build_llm_detail_items(
    outputs_a: dict[str, str],
    outputs_b: dict[str, str],
    model_a: str,
    model_b: str,
    n: int,
    prompts: dict[str, str] | None = None,
    seed: int = 0,
) -> list[StudyItem]:
    """Items for the judge-model musical-detail comparison.

    Outputs are keyed by clip; A/B order is randomized per item and the
    hidden key records the slot assignment for analysis.
    """
    shared = sorted(set(outputs_a) & set(outputs_b))
    if n > len(shared):
        raise InsufficientOutputsError(f"requested {n} items but only {len(shared)} shared clips")
    rng = np.random.default_rng(seed)
    chosen = [shared[i] for i in rng.choice(len(shared), size=n, replace=False)]

    items = []
    for i, clip in enumerate(chosen):
        first, second = (model_a, outputs_a[clip]), (model_b, outputs_b[clip])
        if rng.random() < 0.5:
            first, second = second, first
        items.append(StudyItem(
            item_id=f"jd-{i:05d}",
            kind="llm_detail",
            audio_ref=clip,
            prompt=(prompts or {}).get(clip, "Which response contains more musical detail?"),
            options=[first[1], second[1]],
            answer_key={"first": first[0], "second": second[0]},
        ))
    return items
