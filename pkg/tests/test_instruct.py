import json

import pytest

from musetune.corpus import TrackRecord
from musetune.errors import EndpointError, TemplateError
from musetune.instruct import (
    DEFAULT_QUERY_PHRASES,
    DEFAULT_RESPONSE_PHRASES,
    ChatClient,
    FilterList,
    GenerationRoute,
    InstructionRecord,
    StubLLMServer,
    build_metadata_doc,
    filter_pairs,
    generate_pairs,
    load_template,
    pack_dataset,
    parse_reply,
    route_for,
)
from musetune.mir import AugmentedMetadata, BeatGrid, ChordSegment, KeyLabel


def make_aug():
    return AugmentedMetadata(
        tempo_bpm=120.0,
        key=KeyLabel(6, "minor"),
        beat_grid=BeatGrid(beats=[(0.5, 1), (1.0, 2)]),
        chords=[ChordSegment(0.0, 2.0, "6:min")],
    )


class TestMetadataDoc:
    def test_empty_annotations_four_fields(self):
        record = TrackRecord("t", "d", "x", annotations={})
        doc = json.loads(build_metadata_doc(record, make_aug()))
        assert set(doc) == {"tempo_bpm", "key", "beats", "chords"}
        assert doc["key"] == "F# minor"

    def test_tempo_collision_namespaced(self):
        record = TrackRecord("t", "d", "x", annotations={"tempo": "fast"})
        doc = json.loads(build_metadata_doc(record, make_aug()))
        assert doc["native.tempo"] == "fast"
        assert doc["augmented.tempo_bpm"] == 120.0
        assert "tempo_bpm" not in doc
        # unrelated augmented fields stay top-level
        assert "key" in doc and "beats" in doc and "chords" in doc

    def test_note_events_pass_through(self):
        notes = [{"onset_s": 0.1, "offset_s": 0.5, "pitch": 60, "instrument": "piano"}]
        record = TrackRecord("t", "musicnet", "x", annotations={"notes": notes})
        doc = json.loads(build_metadata_doc(record, make_aug()))
        assert doc["notes"] == notes

    def test_deterministic_key_order(self):
        record = TrackRecord("t", "d", "x", annotations={"zeta": 1, "alpha": 2})
        a = build_metadata_doc(record, make_aug())
        b = build_metadata_doc(
            TrackRecord("t", "d", "x", annotations={"alpha": 2, "zeta": 1}), make_aug()
        )
        assert a == b


class TestReplyParsing:
    def test_two_blocks(self):
        pairs, errors = parse_reply("Q: One?\nA: Yes.\n\nQ: Two?\nA: No.\n")
        assert pairs == [("One?", "Yes."), ("Two?", "No.")]
        assert errors == []

    def test_malformed_third_block(self):
        reply = "Q: One?\nA: Yes.\n\nQ: Two?\nA: No.\n\nHere is a thought."
        pairs, errors = parse_reply(reply)
        assert len(pairs) == 2
        assert len(errors) == 1

    def test_multiline_answer_joined(self):
        pairs, _ = parse_reply("Q: One?\nA: Yes,\nindeed.")
        assert pairs == [("One?", "Yes, indeed.")]

    def test_empty_sides_rejected(self):
        pairs, errors = parse_reply("Q: \nA: Yes.\n\nQ: Two?\nA: ")
        assert pairs == []
        assert len(errors) == 2


class TestRouting:
    def test_reasoning_always_large(self):
        route = route_for("reasoning", "{}")
        assert route.model_tier == "large"
        assert route.max_tracks == 25_000

    def test_long_doc_gets_long_context(self):
        route = route_for("understanding", "x" * 20_000)
        assert route.model_tier == "long_context"

    def test_short_doc_standard(self):
        assert route_for("captioning", "{}").model_tier == "standard"

    def test_reasoning_standard_tier_invalid(self):
        with pytest.raises(ValueError):
            GenerationRoute("reasoning", "standard")


class TestFilters:
    def test_artist_question_rejected(self):
        pairs = [("Who is the artist of this piece?", "A band.")]
        kept, rejected = filter_pairs(pairs)
        assert kept == []
        assert "who is the artist" in rejected[0][1]

    def test_metadata_response_rejected_with_specific_phrase(self):
        pairs = [("What is the tempo?",
                  "Based on the provided metadata, the tempo is 120.")]
        kept, rejected = filter_pairs(pairs)
        assert kept == []
        assert "based on the provided metadata" in rejected[0][1]

    def test_clean_pair_kept(self):
        pairs = [("What is the tempo?", "Around 120 BPM.")]
        kept, rejected = filter_pairs(pairs)
        assert kept == pairs
        assert rejected == []

    def test_case_insensitive(self):
        kept, rejected = filter_pairs([("WHAT IS THE TITLE of this?", "x")])
        assert kept == []

    def test_golden_corpus_item_for_item(self):
        # One pair per listed phrase; every pair rejected and the reason
        # names a phrase genuinely contained in the offending side.
        golden = []
        for phrase in DEFAULT_QUERY_PHRASES:
            golden.append((f"Could you tell me, {phrase}, if possible?",
                           "A plain answer."))
        for phrase in DEFAULT_RESPONSE_PHRASES:
            golden.append(("What stands out here?", f"Well, {phrase}, I think."))
        kept, rejected = filter_pairs(golden)
        assert kept == []
        assert len(rejected) == len(DEFAULT_QUERY_PHRASES) + len(DEFAULT_RESPONSE_PHRASES)
        for (query, response), reason in rejected:
            named = reason.split("contains ")[1].strip("'\"")
            side = query if reason.startswith("query") else response
            assert named.casefold() in side.casefold()

    def test_clean_corpus_passes(self):
        clean = [(f"What is the tempo of piece {i}?", f"Roughly {60 + i} BPM.")
                 for i in range(50)]
        kept, rejected = filter_pairs(clean)
        assert len(kept) == 50
        assert rejected == []

    def test_empty_filterlist_rejected(self):
        with pytest.raises(ValueError):
            FilterList(query_phrases=[], response_phrases=["x"])


class TestGenerateAgainstStub:
    @pytest.fixture
    def stub(self):
        server = StubLLMServer(pairs_per_reply=2).start()
        yield server
        server.stop()

    def test_pairs_from_stub(self, stub):
        client = ChatClient(endpoint_url=stub.url, backoff_base_s=0.01)
        doc = json.dumps({"tempo_bpm": 120.0, "key": "C major"})
        template = load_template("understanding")
        route = route_for("understanding", doc)
        pairs = generate_pairs(doc, "understanding", template, route, client)
        assert len(pairs) == 2
        assert all(q and a for q, a in pairs)

    def test_template_placeholder_required(self, stub):
        client = ChatClient(endpoint_url=stub.url)
        with pytest.raises(TemplateError):
            generate_pairs("{}", "understanding", "no placeholder here",
                           route_for("understanding", "{}"), client)

    def test_retry_then_success(self):
        server = StubLLMServer(pairs_per_reply=1, fail_first=2).start()
        try:
            client = ChatClient(endpoint_url=server.url, max_retries=3,
                                backoff_base_s=0.01)
            reply = client.complete("m", "s", "{}")
            assert "Q: " in reply
            assert server.request_count == 3
        finally:
            server.stop()

    def test_endpoint_error_after_retries(self):
        server = StubLLMServer(fail_first=99).start()
        try:
            client = ChatClient(endpoint_url=server.url, max_retries=2,
                                backoff_base_s=0.01)
            with pytest.raises(EndpointError):
                client.complete("m", "s", "{}")
        finally:
            server.stop()

    def test_unreachable_endpoint(self):
        client = ChatClient(endpoint_url="http://127.0.0.1:9/none",
                            max_retries=1, backoff_base_s=0.01)
        with pytest.raises(EndpointError):
            client.complete("m", "s", "{}")

    def test_canned_reply(self):
        server = StubLLMServer(canned={"PING": "Q: P?\nA: Pong."}).start()
        try:
            client = ChatClient(endpoint_url=server.url, backoff_base_s=0.01)
            assert client.complete("m", "sys", "PING") == "Q: P?\nA: Pong."
        finally:
            server.stop()


class TestPack:
    def _records(self, n):
        return [
            InstructionRecord(id=f"r{i:03d}", dataset_name="d",
                              task_family="understanding", clip_ref=f"c{i}",
                              query=f"Q{i}?", response=f"A{i}.")
            for i in range(n)
        ]

    def test_shard_sizes(self, tmp_path):
        manifest = pack_dataset(self._records(10), tmp_path, shard_size=4, seed=0)
        sizes = [len((tmp_path / s).read_text().splitlines()) for s in manifest["shards"]]
        assert sizes == [4, 4, 2]

    def test_repack_byte_identical(self, tmp_path):
        a_dir, b_dir = tmp_path / "a", tmp_path / "b"
        records = self._records(25)
        pack_dataset(records, a_dir, shard_size=10, seed=5)
        pack_dataset(records, b_dir, shard_size=10, seed=5)
        for name in ("shard-00000.jsonl", "shard-00001.jsonl", "manifest.json"):
            assert (a_dir / name).read_bytes() == (b_dir / name).read_bytes()

    def test_different_seed_different_order(self, tmp_path):
        records = self._records(25)
        pack_dataset(records, tmp_path / "a", shard_size=25, seed=1)
        pack_dataset(records, tmp_path / "b", shard_size=25, seed=2)
        assert (tmp_path / "a" / "shard-00000.jsonl").read_text() \
            != (tmp_path / "b" / "shard-00000.jsonl").read_text()

    def test_manifest_totals(self, tmp_path):
        manifest = pack_dataset(self._records(7), tmp_path, shard_size=3, seed=0)
        assert manifest["total_records"] == 7
        assert manifest["counts"]["d"]["understanding"] == 7

    def test_empty_record_rejected(self):
        with pytest.raises(ValueError):
            InstructionRecord(id="x", dataset_name="d", task_family="understanding",
                              clip_ref="c", query="", response="ok")
