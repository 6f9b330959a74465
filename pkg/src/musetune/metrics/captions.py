"""Linguistic caption metrics: BLEU, ROUGE-L, METEOR-lite, CIDEr.

METEOR here is the exact+stem variant without a synonym dictionary and is
reported as ``meteor_lite``. CIDEr follows the plain TF-IDF n-gram cosine
definition with the conventional x10 scaling, so it lives in [0, 10] while
the others live in [0, 1].
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .tokens import tokenize

MAX_NGRAM = 4
ROUGE_BETA = 1.2
METEOR_ALPHA = 0.9
METEOR_GAMMA = 0.5
METEOR_BETA = 3.0
CIDER_SCALE = 10.0


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


# ---------------------------------------------------------------- BLEU

def corpus_bleu(candidates: list[list[str]], references: list[list[list[str]]]) -> dict:
    """Corpus-level BLEU components.

    Returns the geometric-mean BLEU over 1..4-gram modified precisions,
    the 4-gram-only variant, the per-order precisions, and the brevity
    penalty. Reference length is the closest per item.
    """
    guess = [0] * MAX_NGRAM
    correct = [0] * MAX_NGRAM
    cand_len = 0
    ref_len = 0
    for cand, refs in zip(candidates, references):
        cand_len += len(cand)
        if refs:
            ref_len += min((abs(len(r) - len(cand)), len(r)) for r in refs)[1]
        for n in range(1, MAX_NGRAM + 1):
            counts = _ngrams(cand, n)
            max_ref = Counter()
            for ref in refs:
                for gram, c in _ngrams(ref, n).items():
                    max_ref[gram] = max(max_ref[gram], c)
            guess[n - 1] += max(0, len(cand) - n + 1)
            correct[n - 1] += sum(min(c, max_ref.get(g, 0)) for g, c in counts.items())

    precisions = [
        (correct[i] / guess[i]) if guess[i] > 0 else None for i in range(MAX_NGRAM)
    ]
    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len) if cand_len else 0.0

    usable = [p for p in precisions if p is not None]
    if not usable or any(p == 0.0 for p in usable):
        bleu = 0.0
    else:
        bleu = bp * math.exp(sum(math.log(p) for p in usable) / len(usable))
    p4 = precisions[MAX_NGRAM - 1]
    bleu4 = bp * p4 if p4 else 0.0
    return {"bleu": bleu, "bleu4": bleu4, "precisions": precisions, "brevity_penalty": bp}


# ---------------------------------------------------------------- ROUGE-L

def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0] * (len(b) + 1)
        for j, y in enumerate(b, 1):
            cur[j] = prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1])
        prev = cur
    return prev[-1]


def rouge_l(candidate: list[str], references: list[list[str]]) -> float:
    """LCS F-measure, best reference wins."""
    best = 0.0
    for ref in references:
        lcs = _lcs_length(candidate, ref)
        if lcs == 0 or not candidate or not ref:
            continue
        p = lcs / len(candidate)
        r = lcs / len(ref)
        score = ((1 + ROUGE_BETA ** 2) * p * r) / (r + ROUGE_BETA ** 2 * p)
        best = max(best, score)
    return best


# ---------------------------------------------------------------- METEOR (lite)

def _stem(word: str) -> str:
    if word.endswith("sses"):
        word = word[:-2]
    elif word.endswith("ies"):
        word = word[:-2]
    elif word.endswith("s") and not word.endswith("ss") and len(word) > 3:
        word = word[:-1]
    if word.endswith("ing") and len(word) > 5:
        word = word[:-3]
    elif word.endswith("ed") and len(word) > 4:
        word = word[:-2]
    return word


def _align(cand: list[str], ref: list[str]) -> list[tuple[int, int]]:
    """Greedy in-order alignment: exact matches first, then stem matches."""
    pairs: dict[int, int] = {}
    used_ref: set[int] = set()
    for stage in ("exact", "stem"):
        for i, tok in enumerate(cand):
            if i in pairs:
                continue
            key = tok if stage == "exact" else _stem(tok)
            for j, rtok in enumerate(ref):
                if j in used_ref:
                    continue
                target = rtok if stage == "exact" else _stem(rtok)
                if key == target:
                    pairs[i] = j
                    used_ref.add(j)
                    break
    return sorted(pairs.items())


def _chunks(alignment: list[tuple[int, int]]) -> int:
    if not alignment:
        return 0
    chunks = 1
    for (i0, j0), (i1, j1) in zip(alignment, alignment[1:]):
        if i1 != i0 + 1 or j1 != j0 + 1:
            chunks += 1
    return chunks


def meteor_lite(candidate: list[str], references: list[list[str]]) -> float:
    """Harmonic precision/recall on exact+stem matches with a
    fragmentation penalty; no synonym resources."""
    best = 0.0
    for ref in references:
        if not candidate or not ref:
            continue
        alignment = _align(candidate, ref)
        m = len(alignment)
        if m == 0:
            continue
        p = m / len(candidate)
        r = m / len(ref)
        f_mean = p * r / (METEOR_ALPHA * p + (1 - METEOR_ALPHA) * r)
        penalty = METEOR_GAMMA * (_chunks(alignment) / m) ** METEOR_BETA
        best = max(best, f_mean * (1.0 - penalty))
    return best


# ---------------------------------------------------------------- CIDEr

def build_idf(reference_corpus: list[list[list[str]]]) -> tuple[dict, int]:
    """Document frequencies over a reference corpus.

    Returns ({ngram: df}, corpus size); df counts items whose reference
    set contains the n-gram.
    """
    df: dict[tuple, int] = {}
    for refs in reference_corpus:
        seen = set()
        for ref in refs:
            for n in range(1, MAX_NGRAM + 1):
                seen.update(_ngrams(ref, n))
        for gram in seen:
            df[gram] = df.get(gram, 0) + 1
    return df, len(reference_corpus)


def _tfidf_vec(tokens: list[str], df: dict, n_docs: int) -> list[dict]:
    log_n = math.log(max(n_docs, 1))
    vecs = []
    for n in range(1, MAX_NGRAM + 1):
        vec = {}
        for gram, tf in _ngrams(tokens, n).items():
            idf = log_n - math.log(max(df.get(gram, 0), 1))
            vec[gram] = tf * idf
        vecs.append(vec)
    return vecs


def _cosine(a: dict, b: dict) -> float:
    na = math.sqrt(sum(v * v for v in a.values()))
    nb = math.sqrt(sum(v * v for v in b.values()))
    if na == 0 or nb == 0:
        return 0.0
    dot = sum(v * b.get(g, 0.0) for g, v in a.items())
    return dot / (na * nb)


def cider(
    candidate: list[str],
    references: list[list[str]],
    df: dict,
    n_docs: int,
) -> float:
    """Average TF-IDF n-gram cosine to the references, scaled by 10."""
    cand_vecs = _tfidf_vec(candidate, df, n_docs)
    per_n = np.zeros(MAX_NGRAM)
    for ref in references:
        ref_vecs = _tfidf_vec(ref, df, n_docs)
        for n in range(MAX_NGRAM):
            per_n[n] += _cosine(cand_vecs[n], ref_vecs[n])
    if references:
        per_n /= len(references)
    return float(CIDER_SCALE * per_n.mean())


# ---------------------------------------------------------------- entry points

def caption_metrics(
    candidate: str,
    references: list[str],
    idf: tuple[dict, int] | None = None,
) -> dict:
    """All caption metrics for one candidate against its references.

    ``idf`` is the (df table, corpus size) pair from :func:`build_idf`
    over the whole reference corpus; without it the item's own references
    serve as a one-document corpus.
    """
    if not references:
        raise ValueError("at least one reference is required")
    cand = tokenize(candidate)
    refs = [tokenize(r) for r in references]
    if not cand:
        return {"bleu": 0.0, "bleu4": 0.0, "meteor_lite": 0.0, "rouge_l": 0.0, "cider": 0.0}
    df, n_docs = idf if idf is not None else build_idf([refs])
    bleu_parts = corpus_bleu([cand], [refs])
    return {
        "bleu": bleu_parts["bleu"],
        "bleu4": bleu_parts["bleu4"],
        "meteor_lite": meteor_lite(cand, refs),
        "rouge_l": rouge_l(cand, refs),
        "cider": cider(cand, refs, df, n_docs),
    }


def score_caption_corpus(items: list[tuple[str, list[str]]]) -> dict:
    """Corpus-level caption report: corpus BLEU plus per-item means."""
    tokenized = [(tokenize(c), [tokenize(r) for r in refs]) for c, refs in items]
    df, n_docs = build_idf([refs for _, refs in tokenized])
    bleu_parts = corpus_bleu([c for c, _ in tokenized], [r for _, r in tokenized])
    per_item = {
        "meteor_lite": [meteor_lite(c, r) for c, r in tokenized],
        "rouge_l": [rouge_l(c, r) for c, r in tokenized],
        "cider": [cider(c, r, df, n_docs) for c, r in tokenized],
    }
    return {
        "n": len(items),
        "bleu": bleu_parts["bleu"],
        "bleu4": bleu_parts["bleu4"],
        "brevity_penalty": bleu_parts["brevity_penalty"],
        "meteor_lite": float(np.mean(per_item["meteor_lite"])) if items else 0.0,
        "rouge_l": float(np.mean(per_item["rouge_l"])) if items else 0.0,
        "cider": float(np.mean(per_item["cider"])) if items else 0.0,
        "cider_convention": "x10 scaling; divide by 10 for the unscaled variant",
    }
