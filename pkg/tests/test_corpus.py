import json

import numpy as np
import pytest

from musetune.audio import write_wav
from musetune.corpus import CorpusManifest, TrackRecord, assign_split, ingest, tally
from musetune.errors import NotEnoughTracksError


def make_generic_corpus(root, n=3, annotations=None):
    for i in range(n):
        (root / f"track{i}.wav").write_bytes(write_wav(np.zeros(22050), 22050))
        payload = annotations if annotations is not None else {"tags": [f"tag{i}", "rock"]}
        (root / f"track{i}.json").write_text(json.dumps(payload))


class TestAdapters:
    def test_generic_passthrough(self, tmp_path):
        make_generic_corpus(tmp_path, n=3)
        records = list(ingest(tmp_path, "generic"))
        assert len(records) == 3
        assert all("tags" in r.annotations for r in records)
        assert records[0].annotations["tags"][1] == "rock"

    def test_generic_preserves_unknown_fields(self, tmp_path):
        make_generic_corpus(tmp_path, n=1,
                            annotations={"tags": ["a"], "weird_field": {"x": 1}})
        record = next(ingest(tmp_path, "generic"))
        assert record.annotations["weird_field"] == {"x": 1}

    def test_generic_skips_malformed_sidecar(self, tmp_path, caplog):
        make_generic_corpus(tmp_path, n=2)
        (tmp_path / "track0.json").write_text("{not json")
        records = list(ingest(tmp_path, "generic"))
        assert [r.track_id for r in records] == ["track1"]

    def test_missing_audio_skipped(self, tmp_path):
        make_generic_corpus(tmp_path, n=1)
        (tmp_path / "phantom.json").write_text("{}")
        records = list(ingest(tmp_path, "generic"))
        assert [r.track_id for r in records] == ["track0"]

    def test_musicnet_note_events(self, tmp_path):
        (tmp_path / "2301.wav").write_bytes(write_wav(np.zeros(22050), 22050))
        (tmp_path / "2301_labels.csv").write_text(
            "start_time,end_time,instrument,note\n"
            "44100,88200,violin,69\n"
            "88200,132300,cello,48\n"
        )
        record = next(ingest(tmp_path, "musicnet"))
        notes = record.annotations["notes"]
        assert notes[0] == {"onset_s": 1.0, "offset_s": 2.0, "pitch": 69,
                            "instrument": "violin"}
        assert len(notes) == 2

    def test_yt8m_all_train(self, tmp_path):
        audio = tmp_path / "audio"
        audio.mkdir()
        rows = ["video_id,caption"]
        for i in range(4):
            vid = f"vid{i}"
            (audio / f"{vid}.wav").write_bytes(write_wav(np.zeros(1000), 22050))
            rows.append(f"{vid},a caption")
        (tmp_path / "clips.csv").write_text("\n".join(rows) + "\n")
        records = list(ingest(tmp_path, "yt8m_mtc"))
        assert len(records) == 4
        assert all(r.split == "train" for r in records)

    def test_unknown_adapter(self, tmp_path):
        with pytest.raises(ValueError):
            list(ingest(tmp_path, "nope"))

    def test_idempotent(self, tmp_path):
        make_generic_corpus(tmp_path, n=3)
        first = [r.to_json_dict() for r in ingest(tmp_path, "generic")]
        second = [r.to_json_dict() for r in ingest(tmp_path, "generic")]
        assert first == second


def _records(n):
    return [TrackRecord(track_id=f"t{i:05d}", dataset_name="d", audio_path="x")
            for i in range(n)]


class TestSplits:
    def test_random_n_counts(self):
        records = assign_split(_records(5000), "random_n", n=1000, seed=42)
        n_test = sum(r.split == "test" for r in records)
        assert n_test == 1000
        assert sum(r.split == "train" for r in records) == 4000

    def test_disjoint(self):
        records = assign_split(_records(100), "random_n", n=30, seed=1)
        test_ids = {r.track_id for r in records if r.split == "test"}
        train_ids = {r.track_id for r in records if r.split == "train"}
        assert test_ids & train_ids == set()

    def test_same_seed_identical(self):
        a = assign_split(_records(200), "random_n", n=50, seed=9)
        b = assign_split(_records(200), "random_n", n=50, seed=9)
        assert [r.split for r in a] == [r.split for r in b]

    def test_different_seed_differs(self):
        a = assign_split(_records(200), "random_n", n=50, seed=9)
        b = assign_split(_records(200), "random_n", n=50, seed=10)
        assert [r.split for r in a] != [r.split for r in b]

    def test_official_empty_list_all_train(self):
        records = assign_split(_records(10), "official", test_ids=[])
        assert all(r.split == "train" for r in records)

    def test_not_enough_tracks(self):
        with pytest.raises(NotEnoughTracksError):
            assign_split(_records(10), "random_n", n=11, seed=0)


class TestTally:
    def test_published_train_totals(self):
        # Per-dataset train counts from the source corpora documentation.
        manifests = [
            CorpusManifest("fma", {"train": {"understanding": 237_599,
                                             "reasoning": 61_373}}),
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
        per_task = report["splits"]["train"]["per_task"]
        assert per_task["captioning"] == 10_631
        assert per_task["understanding"] == 808_478
        assert per_task["reasoning"] == 374_237

    def test_single_manifest_identity(self):
        m = CorpusManifest("d", {"train": {"captioning": 7}, "test": {"captioning": 3}})
        report = tally([m])
        assert report["splits"]["train"]["total"] == 7
        assert report["splits"]["test"]["total"] == 3
        assert report["grand_total"] == 10

    def test_empty(self):
        report = tally([])
        assert report["grand_total"] == 0
        assert report["splits"] == {}

    def test_percentages(self):
        m = CorpusManifest("d", {"train": {"a": 25, "b": 75}})
        report = tally([m])
        assert report["splits"]["train"]["per_task_pct"] == {"a": 0.25, "b": 0.75}

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            CorpusManifest("d", {"train": {"a": -1}})
