"""Corpus-level evaluation over prediction/reference files.

Predictions are line-delimited JSON records {clip_ref, prompt?, text};
references are {clip_ref, ...labels}. Unparseable answers score zero and
are flagged rather than dropped, penalizing non-answers.
"""

from __future__ import annotations

import numpy as np

from .errors import KeyParseError
from .metrics import (
    HashTfidfEmbedder,
    acc2,
    genre_acc1,
    instrument_f1,
    mirex_key_score,
    parse_bpm_text,
    parse_key_text,
    score_caption_corpus,
    token_stats,
    word_count_probe,
)


def _join(predictions: list[dict], references: list[dict]) -> list[tuple[dict, dict]]:
    refs = {r["clip_ref"]: r for r in references}
    joined = [(p, refs[p["clip_ref"]]) for p in predictions if p["clip_ref"] in refs]
    if not joined:
        raise ValueError("no prediction/reference clip_ref overlap")
    return joined


def eval_key(predictions: list[dict], references: list[dict]) -> dict:
    scores = []
    flagged = 0
    for pred, ref in _join(predictions, references):
        truth = parse_key_text(ref["key"])
        try:
            est = parse_key_text(pred["text"])
        except KeyParseError:
            flagged += 1
            scores.append(0.0)
            continue
        scores.append(mirex_key_score(est, truth))
    return {"metric": "mirex_key", "n": len(scores), "flagged_unparseable": flagged,
            "mean_score": float(np.mean(scores)), "per_item": scores}


def eval_tempo(predictions: list[dict], references: list[dict]) -> dict:
    correct = []
    flagged = 0
    for pred, ref in _join(predictions, references):
        try:
            bpm = parse_bpm_text(pred["text"])
        except KeyParseError:
            flagged += 1
            correct.append(False)
            continue
        correct.append(acc2(bpm, float(ref["bpm"])))
    return {"metric": "tempo_acc2", "n": len(correct), "flagged_unparseable": flagged,
            "accuracy": float(np.mean(correct)), "per_item": [bool(c) for c in correct]}


def eval_genre(predictions: list[dict], references: list[dict],
               labels: list[str] | None = None, embedder=None) -> dict:
    joined = _join(predictions, references)
    candidates = sorted(labels or {r["genre"] for _, r in joined})
    embedder = embedder or HashTfidfEmbedder()
    correct = [genre_acc1(p["text"], r["genre"], candidates, embedder) for p, r in joined]
    return {"metric": "genre_acc1", "n": len(correct), "labels": candidates,
            "accuracy": float(np.mean(correct)), "per_item": correct}


def eval_instrument(predictions: list[dict], references: list[dict]) -> dict:
    scores = [instrument_f1(p["text"], r["instruments"]) for p, r in _join(predictions, references)]
    return {"metric": "instrument_f1", "n": len(scores),
            "mean_f1": float(np.mean(scores)), "per_item": scores}


def eval_captions(predictions: list[dict], references: list[dict]) -> dict:
    items = [(p["text"], list(r["captions"])) for p, r in _join(predictions, references)]
    report = score_caption_corpus(items)
    report["metric"] = "captions"
    return report


def eval_tokens(predictions: list[dict]) -> dict:
    report = token_stats([p["text"] for p in predictions])
    report["metric"] = "token_stats"
    report["n"] = len(predictions)
    return report


def eval_probe(predictions: list[dict]) -> dict:
    groups: dict[str, list[str]] = {}
    for p in predictions:
        groups.setdefault(p.get("prompt", "unknown"), []).append(p["text"])
    report = {"metric": "word_count_probe", "per_prompt": word_count_probe(groups)}
    return report


def format_table(report: dict) -> str:
    """Plain-text summary table for one eval report."""
    rows = [("metric", report.get("metric", "?"))]
    for key in ("n", "mean_score", "accuracy", "mean_f1", "bleu", "bleu4",
                "meteor_lite", "rouge_l", "cider", "unique_tokens",
                "mean_token_len", "flagged_unparseable"):
        if key in report:
            value = report[key]
            rows.append((key, f"{value:.4f}" if isinstance(value, float) else str(value)))
    if "per_prompt" in report:
        for prompt, stats in report["per_prompt"].items():
            rows.append((f"[{prompt}] mean_words", f"{stats['mean_words']:.2f}"))
            rows.append((f"[{prompt}] one_word_fraction", f"{stats['one_word_fraction']:.3f}"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)
