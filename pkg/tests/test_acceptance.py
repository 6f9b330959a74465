"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measured numbers (run with -s or -rP to see them all).
"""

import json
import math
import time
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from musetune.audio import AudioClip, CropPolicy, crop_clip
from musetune.corpus import CorpusManifest, tally
from musetune.embed import EmbeddingMatrix, pool_frames
from musetune.instruct import (
    DEFAULT_QUERY_PHRASES,
    DEFAULT_RESPONSE_PHRASES,
    StubLLMServer,
    filter_pairs,
)
from musetune.metrics import acc2, caption_metrics, corpus_bleu, mirex_key_score, tokenize
from musetune.mir import KeyLabel, estimate_key, estimate_tempo, recognize_chords, track_beats
from musetune.pipeline import PipelineConfig, run_pipeline
from musetune.study import Judgment, analyze, build_matching_study, build_pairwise_study

from conftest import SR, click_track, triad
from test_metrics import ALL_KEYS, oracle_mirex
from test_pipeline_cli import base_config, make_corpus


def _report(name, detail):
    print(f"PASS  {name}: {detail}")


def test_mirex_exhaustive_oracle():
    t0 = time.time()
    counts = Counter()
    for est in ALL_KEYS:
        for ref in ALL_KEYS:
            score = mirex_key_score(est, ref)
            assert score == oracle_mirex(est, ref), (est, ref)
            counts[score] += 1
    elapsed = time.time() - t0
    assert counts == {1.0: 24, 0.5: 24, 0.3: 24, 0.2: 24, 0.0: 480}
    assert elapsed < 1.0
    _report("mirex-exhaustive", f"576 pairs, counts 24/24/24/24/480, {elapsed:.3f}s")


def test_acc2_rule():
    t0 = time.time()
    # the five worked examples
    assert acc2(120, 120) is True
    assert acc2(60, 120) is True
    assert acc2(100, 120) is False
    assert acc2(240, 120) is True
    assert acc2(40, 120) is True
    # inclusive boundary
    assert acc2(124.8, 120) is True
    # 10,000 randomized pairs vs a direct re-evaluation of the rule
    rng = np.random.default_rng(2024)
    est = rng.uniform(20, 400, 10_000)
    ref = rng.uniform(40, 200, 10_000)
    for e, r in zip(est, ref):
        direct = any(
            abs(e - m * r) <= 0.04 * m * r for m in (1 / 3, 1 / 2, 1.0, 2.0, 3.0)
        )
        assert acc2(e, r) == direct
    elapsed = time.time() - t0
    assert elapsed < 1.0
    _report("acc2-rule", f"5 examples + boundary + 10000 random pairs, {elapsed:.3f}s")


def test_pooling_size_contract():
    rng = np.random.default_rng(7)
    data = rng.normal(size=(8625, 4800)).astype(np.float32)
    emb = EmbeddingMatrix(data, 345.0)
    t0 = time.time()
    pooled = pool_frames(emb, frame_len_s=0.1)
    elapsed = time.time() - t0
    assert pooled.data.shape == (250, 4800)
    assert pooled.data.size == 1_200_000
    # naive per-window mean oracle (exact-rational window membership)
    rpw = Fraction(345) * Fraction(1, 10)
    for k in (0, 1, 124, 248, 249):
        lo = math.ceil(k * rpw)
        hi = math.ceil((k + 1) * rpw)
        oracle = data[lo:hi].astype(np.float64).mean(axis=0)
        np.testing.assert_allclose(pooled.data[k], oracle, rtol=1e-6)
    assert elapsed < 2.0
    _report("pooling-size-contract",
            f"8625x4800 @345Hz -> 250x4800 ({pooled.data.size} values), {elapsed:.3f}s")


def test_crop_policy_distribution():
    policy = CropPolicy(rng_seed=99)
    samples_90 = np.zeros(90 * SR)
    hits = sum(
        crop_clip(AudioClip(f"t{i}", samples_90, SR), policy).offset_s == 30.0
        for i in range(10_000)
    )
    fraction = hits / 10_000
    assert 0.78 <= fraction <= 0.82

    # short-track cases, bit-exact
    short = AudioClip("short", np.linspace(-0.5, 0.5, 20 * SR), SR)
    clip = crop_clip(short, policy)
    assert clip.offset_s == 0.0
    np.testing.assert_array_equal(clip.samples, short.samples)

    mid = AudioClip("mid", np.linspace(-0.5, 0.5, 45 * SR), SR)
    clip = crop_clip(mid, policy)
    assert clip.offset_s == 0.0
    assert len(clip.samples) == 25 * SR
    np.testing.assert_array_equal(clip.samples, mid.samples[: 25 * SR])
    _report("crop-policy", f"active fraction {fraction:.4f} in [0.78, 0.82]; "
            "short tracks bit-exact")


def test_filter_golden_corpus():
    golden = []
    for phrase in DEFAULT_QUERY_PHRASES:
        golden.append(((f"And now, {phrase}, please?", "A fine answer."), phrase, "query"))
    for phrase in DEFAULT_RESPONSE_PHRASES:
        golden.append((("What do you hear?", f"Hmm, {phrase}, I suppose."), phrase, "response"))

    kept, rejected = filter_pairs([pair for pair, _, _ in golden])
    assert kept == []
    assert len(rejected) == len(golden)
    for ((pair, phrase, side), ((q, a), reason)) in zip(golden, rejected):
        assert reason.startswith(side)
        named = reason.split("contains ")[1].strip("'\"")
        assert named.casefold() in (q if side == "query" else a).casefold()
        assert phrase.casefold() in (q if side == "query" else a).casefold()

    clean = [(f"What is the tempo of piece {i}?", f"It moves at about {60 + i} beats per minute.")
             for i in range(100)]
    kept, rejected = filter_pairs(clean)
    assert len(kept) == 100 and not rejected
    _report("filter-golden", f"{len(golden)} phrase fixtures rejected item-for-item; "
            "clean fixture 100% kept")


def test_dsp_oracles():
    timings = {}

    t0 = time.time()
    clicks = AudioClip("click", click_track(0.5, 25.0), SR)
    bpm = estimate_tempo(clicks)
    assert acc2(bpm, 120.0)
    timings["tempo"] = time.time() - t0

    t0 = time.time()
    cmaj = AudioClip("cmaj", triad([60, 64, 67], 10.0), SR)
    est = estimate_key(cmaj)
    assert (est.tonic, est.mode) == (0, "major")
    assert mirex_key_score(est, KeyLabel(0, "major")) == 1.0
    timings["key"] = time.time() - t0

    t0 = time.time()
    gmaj = AudioClip("gmaj", triad([67, 71, 74], 10.0), SR)
    assert (estimate_key(gmaj).tonic, estimate_key(gmaj).mode) == (7, "major")
    timings["key+7"] = time.time() - t0

    t0 = time.time()
    two = np.concatenate([triad([60, 64, 67], 4.0), triad([67, 71, 74], 4.0)])
    segments = recognize_chords(AudioClip("two", two, SR))
    hop_s = 512 / SR
    n_frames = int(8.0 / hop_s)
    agree = sum(
        next(s.label for s in segments if s.start_s <= k * hop_s < s.end_s)
        == ("0:maj" if k * hop_s < 4.0 else "7:maj")
        for k in range(n_frames)
    )
    assert agree / n_frames >= 0.80
    timings["chords"] = time.time() - t0

    t0 = time.time()
    grid = track_beats(clicks, bpm)
    click_times = np.arange(0.0, 25.0, 0.5)
    for t, _ in grid.beats:
        assert min(abs(t - c) for c in click_times) <= 0.070
    timings["beats"] = time.time() - t0

    assert all(v < 5.0 for v in timings.values()), timings
    _report("dsp-oracles", "; ".join(f"{k} {v:.2f}s" for k, v in timings.items())
            + f"; chord agreement {agree / n_frames:.2%}")


def test_caption_metric_oracles():
    identity = caption_metrics("a gentle piano melody over soft strings",
                               ["a gentle piano melody over soft strings"])
    assert identity["bleu"] == pytest.approx(1.0)
    assert identity["rouge_l"] == pytest.approx(1.0)

    disjoint = caption_metrics("xylophone solo", ["quiet ambient drone recording"])
    assert all(v == 0.0 for v in disjoint.values())

    parts = corpus_bleu([tokenize("the cat sat")], [[tokenize("the cat sat down")]])
    assert abs(parts["brevity_penalty"] - math.exp(1 - 4 / 3)) <= 1e-9
    assert abs(parts["bleu"] - math.exp(1 - 4 / 3)) <= 1e-9
    _report("caption-oracles", "identity BLEU/ROUGE 1.0; disjoint 0.0; "
            f"brevity penalty matches e^(1-4/3) to 1e-9")


def test_matching_chance_and_order():
    outputs = {("m", f"p{p}", f"c{c}"): f"text {p}-{c}"
               for p in range(4) for c in range(100)}
    items = build_matching_study(outputs, seed=31)
    rng = np.random.default_rng(777)  # independent of the construction stream
    judgments = [Judgment(i.item_id, f"r{k}", int(rng.integers(3)))
                 for k, i in enumerate(items[:1000])]
    report = analyze(judgments, items)
    accuracy = report["matching"]["overall_accuracy"]
    assert abs(accuracy - 1 / 3) <= 0.05

    pw_outputs = {
        "subject": {f"c{i}": f"alpha text {i}" for i in range(1000)},
        "baseline": {f"c{i}": f"beta text {i}" for i in range(1000)},
    }
    pw_items = build_pairwise_study(pw_outputs, "subject", 1000, seed=13)
    frac = np.mean([i.answer_key["first"] == "subject" for i in pw_items])
    assert abs(frac - 0.5) <= 0.04
    _report("study-chance", f"matching accuracy {accuracy:.4f} ~ 1/3; "
            f"subject-first fraction {frac:.4f} ~ 0.5")


def test_end_to_end_desk_pipeline(tmp_path):
    t0 = time.time()
    corpus = make_corpus(tmp_path / "corpus", n=10)
    server = StubLLMServer(pairs_per_reply=3).start()
    try:
        config_a = base_config(corpus, server, tmp_path / "a")
        ledger = run_pipeline(config_a)
        stages = ledger["stages"]
        assert stages["ingested"] == stages["cropped"] == stages["augmented"] == 10
        assert stages["generated_pairs"] - stages["filtered_out"] == stages["packed"]

        config_b = base_config(corpus, server, tmp_path / "b")
        run_pipeline(config_b)
        for rel in ("records.jsonl", "augmented.jsonl", "pairs.jsonl", "kept.jsonl",
                    "packed/manifest.json", "packed/shard-00000.jsonl"):
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()
    finally:
        server.stop()
    elapsed = time.time() - t0
    assert elapsed < 120.0
    _report("desk-pipeline", f"ledger consistent ({stages}); "
            f"rerun byte-identical; {elapsed:.1f}s")


def test_bookkeeping_total():
    manifests = [
        CorpusManifest("fma", {"train": {"understanding": 237_599, "reasoning": 61_373}}),
        CorpusManifest("mtg_jamendo", {"train": {"understanding": 407_070,
                                                 "reasoning": 173_604}}),
        CorpusManifest("magnatagatune", {"train": {"understanding": 119_352,
                                                   "reasoning": 123_727}}),
        CorpusManifest("musiccaps", {"train": {"captioning": 2_663}}),
        CorpusManifest("musicnet", {"train": {"captioning": 3_799,
                                              "understanding": 44_457,
                                              "reasoning": 15_533}}),
        CorpusManifest("yt8m_mtc", {"train": {"captioning": 4_169}}),
    ]
    report = tally(manifests)
    assert report["splits"]["train"]["total"] == 1_193_346
    _report("bookkeeping", f"train total {report['splits']['train']['total']:,}")
