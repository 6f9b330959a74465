import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from musetune import cli
from musetune.audio import write_wav
from musetune.embed import EmbeddingMatrix, read_embd, write_embd
from musetune.instruct import StubLLMServer
from musetune.pipeline import PipelineConfig, read_jsonl, run_pipeline

from conftest import SR, click_track, triad


def make_corpus(root: Path, n=10, dur_s=10.0):
    """Synthetic tonal corpus every estimator can handle."""
    root.mkdir(parents=True, exist_ok=True)
    for i in range(n):
        shift = i % 12
        samples = 0.6 * triad([60 + shift, 64 + shift, 67 + shift], dur_s) \
            + 0.4 * click_track(0.5, dur_s)
        samples /= np.abs(samples).max()
        (root / f"track{i:02d}.wav").write_bytes(write_wav(samples, SR))
        (root / f"track{i:02d}.json").write_text(json.dumps(
            {"tags": ["synthetic", f"variant{i}"], "genres": ["electronic"]}
        ))
    return root


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    return make_corpus(tmp_path_factory.mktemp("corpus"), n=10)


@pytest.fixture(scope="module")
def stub():
    server = StubLLMServer(pairs_per_reply=3).start()
    yield server
    server.stop()


def base_config(corpus, stub, out_dir) -> PipelineConfig:
    return PipelineConfig(
        corpus_dir=str(corpus),
        out_dir=str(out_dir),
        endpoint_url=stub.url,
        adapter="generic",
        task_family="understanding",
        target_rate=SR,
        seed=7,
        crop_seed=7,
        shard_size=8,
    )


class TestPipeline:
    def test_end_to_end_counts(self, corpus, stub, tmp_path):
        ledger = run_pipeline(base_config(corpus, stub, tmp_path / "run"))
        stages = ledger["stages"]
        assert stages["ingested"] == 10
        assert stages["ingested"] == stages["cropped"] == stages["augmented"]
        assert stages["generated_pairs"] == 30
        assert stages["generated_pairs"] - stages["filtered_out"] == stages["packed"]
        assert stages["filtered_out"] == 0
        assert stages["packed"] == 30

    def test_tainted_responses_filtered(self, corpus, tmp_path):
        server = StubLLMServer(pairs_per_reply=3, tainted_per_reply=1).start()
        try:
            ledger = run_pipeline(base_config(corpus, server, tmp_path / "run"))
            assert ledger["stages"]["generated_pairs"] == 30
            assert ledger["stages"]["filtered_out"] == 10
            assert ledger["stages"]["packed"] == 20
            rejected = read_jsonl(tmp_path / "run" / "rejected.jsonl")
            assert all("based on the provided metadata" in r["reason"] for r in rejected)
        finally:
            server.stop()

    def test_rerun_byte_identical(self, corpus, stub, tmp_path):
        config_a = base_config(corpus, stub, tmp_path / "a")
        config_b = base_config(corpus, stub, tmp_path / "b")
        run_pipeline(config_a)
        run_pipeline(config_b)
        for rel in ("records.jsonl", "augmented.jsonl", "pairs.jsonl", "kept.jsonl",
                    "packed/shard-00000.jsonl", "packed/manifest.json"):
            a = (Path(config_a.out_dir) / rel).read_bytes()
            b = (Path(config_b.out_dir) / rel).read_bytes()
            assert a == b, rel

    def test_resume_after_interrupted_generate(self, corpus, stub, tmp_path):
        config = base_config(corpus, stub, tmp_path / "full")
        full_ledger = run_pipeline(config)
        full_manifest = (tmp_path / "full" / "packed" / "manifest.json").read_bytes()

        # simulate a kill mid-generate: keep only the first 4 pair lines
        resumed = tmp_path / "resumed"
        config2 = base_config(corpus, stub, resumed)
        run_pipeline(config2)
        pairs_file = resumed / "pairs.jsonl"
        lines = pairs_file.read_text().splitlines()
        pairs_file.write_text("\n".join(lines[:4]) + "\n")
        for rel in ("kept.jsonl", "rejected.jsonl", "ledger.json"):
            (resumed / rel).unlink()

        resumed_ledger = run_pipeline(config2)
        assert resumed_ledger["stages"] == full_ledger["stages"]
        assert (resumed / "packed" / "manifest.json").read_bytes() == full_manifest

    def test_config_hash_stable(self, corpus, stub, tmp_path):
        a = base_config(corpus, stub, tmp_path / "x")
        b = base_config(corpus, stub, tmp_path / "x")
        assert a.config_hash() == b.config_hash()
        b.jobs = 4  # operational knob, not part of the run identity
        assert a.config_hash() == b.config_hash()
        b.seed = 8
        assert a.config_hash() != b.config_hash()

    def test_parallel_jobs_byte_identical(self, corpus, stub, tmp_path):
        import dataclasses
        serial = base_config(corpus, stub, tmp_path / "serial")
        parallel = dataclasses.replace(serial, out_dir=str(tmp_path / "parallel"), jobs=4)
        run_pipeline(serial)
        run_pipeline(parallel)
        for rel in ("augmented.jsonl", "pairs.jsonl", "kept.jsonl",
                    "packed/shard-00000.jsonl", "packed/manifest.json"):
            a = (tmp_path / "serial" / rel).read_bytes()
            b = (tmp_path / "parallel" / rel).read_bytes()
            assert a == b, rel

    def test_reasoning_tier_recorded_and_capped(self, corpus, stub, tmp_path):
        from musetune.instruct import ChatClient
        from musetune.pipeline import stage_augment, stage_generate
        from musetune.audio import CropPolicy

        records = tmp_path / "records.jsonl"
        augmented = tmp_path / "augmented.jsonl"
        pairs = tmp_path / "pairs.jsonl"
        cli.main(["ingest", "--dataset-dir", str(corpus), "--adapter", "generic",
                  "--out", str(records)])
        stage_augment(records, augmented, CropPolicy(rng_seed=0), target_rate=SR)
        client = ChatClient(endpoint_url=stub.url, backoff_base_s=0.01)
        stage_generate(augmented, pairs, "reasoning", client, track_cap=4, seed=3)
        rows = read_jsonl(pairs)
        assert len(rows) == 4  # capped subsample
        assert all(r["model_tier"] == "large" for r in rows)

    def test_all_crops_captioning_with_note_windows(self, stub, tmp_path):
        from musetune.pipeline import stage_augment
        from musetune.audio import CropPolicy, write_wav as _ww

        corpus = tmp_path / "mn"
        corpus.mkdir()
        dur = 60.0
        samples = 0.6 * triad([60, 64, 67], dur) + 0.4 * click_track(0.5, dur)
        samples /= np.abs(samples).max()
        (corpus / "4567.wav").write_bytes(write_wav(samples, SR))
        (corpus / "4567_labels.csv").write_text(
            "start_time,end_time,instrument,note\n"
            + "\n".join(f"{int(t * 44100)},{int((t + 1) * 44100)},violin,69"
                        for t in (2, 30, 55))
            + "\n")
        records = tmp_path / "records.jsonl"
        augmented = tmp_path / "augmented.jsonl"
        cli.main(["ingest", "--dataset-dir", str(corpus), "--adapter", "musicnet",
                  "--out", str(records)])
        stats = stage_augment(records, augmented, CropPolicy(rng_seed=0),
                              target_rate=SR, all_crops=True)
        entries = read_jsonl(augmented)
        assert stats["cropped"] == len(entries) == 3  # 60 s -> 25 + 25 + 10
        assert [e["offset_s"] for e in entries] == [0.0, 25.0, 50.0]
        # note events are windowed and shifted per crop
        docs = [json.loads(e["doc"]) for e in entries]
        assert [n["onset_s"] for n in docs[0]["notes"]] == [2.0]
        assert [n["onset_s"] for n in docs[1]["notes"]] == [5.0]   # 30 - 25
        assert [n["onset_s"] for n in docs[2]["notes"]] == [5.0]   # 55 - 50


class TestCLI:
    def test_stage_subcommands_chain(self, corpus, stub, tmp_path):
        records = tmp_path / "records.jsonl"
        augmented = tmp_path / "augmented.jsonl"
        pairs = tmp_path / "pairs.jsonl"
        kept = tmp_path / "kept.jsonl"
        rejected = tmp_path / "rejected.jsonl"

        assert cli.main(["ingest", "--dataset-dir", str(corpus),
                         "--adapter", "generic", "--out", str(records)]) == 0
        assert len(read_jsonl(records)) == 10

        assert cli.main(["augment", "--records", str(records),
                         "--out", str(augmented), "--target-rate", str(SR)]) == 0
        assert len(read_jsonl(augmented)) == 10

        assert cli.main(["generate", "--augmented", str(augmented),
                         "--out", str(pairs), "--task", "understanding",
                         "--endpoint", stub.url]) == 0
        assert sum(len(d["pairs"]) for d in read_jsonl(pairs)) == 30

        assert cli.main(["filter", "--pairs", str(pairs), "--kept", str(kept),
                         "--rejected", str(rejected), "--task", "understanding"]) == 0
        assert len(read_jsonl(kept)) == 30

        assert cli.main(["pack", "--kept", str(kept), "--out-dir",
                         str(tmp_path / "packed"), "--shard-size", "8",
                         "--seed", "7"]) == 0
        manifest = json.loads((tmp_path / "packed" / "manifest.json").read_text())
        assert manifest["total_records"] == 30

    def test_run_subcommand(self, corpus, stub, tmp_path):
        config = base_config(corpus, stub, tmp_path / "run")
        config_path = tmp_path / "config.json"
        import dataclasses
        config_path.write_text(json.dumps(dataclasses.asdict(config)))
        assert cli.main(["run", "--config", str(config_path)]) == 0
        assert (tmp_path / "run" / "ledger.json").exists()

    def test_pool_subcommand(self, tmp_path, rng):
        src = tmp_path / "in.embd"
        dst = tmp_path / "out.embd"
        write_embd(src, EmbeddingMatrix(rng.normal(size=(8625, 32)).astype(np.float32), 345.0))
        assert cli.main(["pool", "--input", str(src), "--output", str(dst)]) == 0
        pooled = read_embd(dst)
        assert pooled.data.shape == (250, 32)
        assert pooled.frame_rate_hz == pytest.approx(10.0)

    def test_eval_key_subcommand(self, tmp_path, capsys):
        predictions = tmp_path / "pred.jsonl"
        references = tmp_path / "ref.jsonl"
        rows = [("c1", "C major", "C major", 1.0),
                ("c2", "G major", "C major", 0.5),
                ("c3", "nothing here", "C major", 0.0)]
        predictions.write_text("\n".join(
            json.dumps({"clip_ref": c, "text": t}) for c, t, _, _ in rows) + "\n")
        references.write_text("\n".join(
            json.dumps({"clip_ref": c, "key": k}) for c, _, k, _ in rows) + "\n")
        out = tmp_path / "report.json"
        assert cli.main(["eval", "key", "--predictions", str(predictions),
                         "--references", str(references), "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["mean_score"] == pytest.approx((1.0 + 0.5 + 0.0) / 3)
        assert report["flagged_unparseable"] == 1

    def test_eval_tempo_subcommand(self, tmp_path):
        predictions = tmp_path / "pred.jsonl"
        references = tmp_path / "ref.jsonl"
        predictions.write_text(
            json.dumps({"clip_ref": "c1", "text": "The tempo is 240 BPM"}) + "\n"
            + json.dumps({"clip_ref": "c2", "text": "100"}) + "\n")
        references.write_text(
            json.dumps({"clip_ref": "c1", "bpm": 120}) + "\n"
            + json.dumps({"clip_ref": "c2", "bpm": 120}) + "\n")
        out = tmp_path / "report.json"
        assert cli.main(["eval", "tempo", "--predictions", str(predictions),
                         "--references", str(references), "--out", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["accuracy"] == pytest.approx(0.5)

    def test_console_script(self):
        proc = subprocess.run([sys.executable, "-m", "musetune.cli", "--help"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "stub-llm" in proc.stdout

    def test_bad_config_errors_cleanly(self, tmp_path):
        missing = tmp_path / "nope.json"
        assert cli.main(["run", "--config", str(missing)]) == 1


class TestStudyCLI:
    def test_build_serve_judge_roundtrip(self, tmp_path):
        # build a matching study from outputs, serve it, script judgments,
        # then check the offline analysis equals the endpoint's.
        rows = []
        for p in range(2):
            for c in range(4):
                rows.append({"model": "m", "prompt": f"prompt{p}",
                             "audio": f"clip{c}", "text": f"resp {p}-{c}"})
        outputs = tmp_path / "outputs.jsonl"
        outputs.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
        study_path = tmp_path / "study.json"
        assert cli.main(["study", "build", "matching", "--outputs", str(outputs),
                         "--seed", "4", "--out", str(study_path)]) == 0
        items = json.loads(study_path.read_text())["items"]
        assert len(items) == 8

        from musetune.service import EvalService, StudyStore
        store = StudyStore(tmp_path / "log.jsonl")
        service = EvalService(store, port=0).start()
        try:
            import requests
            resp = requests.post(f"{service.url}/api/studies", json={"items": items})
            study_id = resp.json()["study_id"]
            while True:
                nxt = requests.get(f"{service.url}/api/studies/{study_id}/items/next",
                                   params={"rater": "r1"}).json()
                if nxt["done"]:
                    break
                requests.post(f"{service.url}/api/judgments", json={
                    "study_id": study_id, "item_id": nxt["item"]["item_id"],
                    "rater_id": "r1", "value": 0,
                })
            endpoint_report = requests.get(
                f"{service.url}/api/studies/{study_id}/results").json()
        finally:
            service.stop()

        # offline analyze over the persisted log
        judgments_path = tmp_path / "judgments.jsonl"
        lines = (tmp_path / "log.jsonl").read_text().splitlines()
        judgments_path.write_text("\n".join(lines) + "\n")
        out = tmp_path / "analysis.json"
        assert cli.main(["study", "analyze", "--study", str(study_path),
                         "--judgments", str(judgments_path), "--out", str(out)]) == 0
        offline = json.loads(out.read_text())
        assert offline == endpoint_report

    def test_judge_llm_subcommand(self, tmp_path):
        from musetune.study import build_llm_detail_items
        a = {f"c{i}": "short" for i in range(3)}
        b = {f"c{i}": "a far longer response with lots of words" for i in range(3)}
        items = build_llm_detail_items(a, b, "A", "B", 3, seed=0)
        items_path = tmp_path / "items.json"
        items_path.write_text(json.dumps({"items": [i.to_json_dict() for i in items]}))

        server = StubLLMServer().start()
        try:
            out = tmp_path / "judgments.jsonl"
            assert cli.main(["study", "judge-llm", "--items", str(items_path),
                             "--endpoint", server.url, "--out", str(out)]) == 0
            judgments = read_jsonl(out)
            assert len(judgments) == 3
        finally:
            server.stop()
