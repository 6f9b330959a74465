"""End-to-end dataset pipeline: ingest -> crop -> augment -> generate ->
filter -> pack.

Each stage is a standalone function over line-delimited JSON files so the
CLI can run them individually; :func:`run_pipeline` chains them with
per-clip checkpoints, so an interrupted run resumes instead of
recomputing. Outputs carry no timestamps: a rerun with the same config
and seed is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .audio import AudioClip, CropPolicy, crop_clip, decode_and_normalize, save_clip
from .corpus import ALL_CROPS_FOR_CAPTIONING, assign_split, ingest
from .corpus.records import TrackRecord
from .errors import MusetuneError
from .instruct import (
    REASONING_TRACK_CAP,
    ChatClient,
    FilterList,
    InstructionRecord,
    build_metadata_doc,
    filter_pairs,
    generate_pairs,
    load_template,
    pack_dataset,
    route_for,
)
from .mir import augment_clip

log = logging.getLogger("musetune.pipeline")


@dataclass
class PipelineConfig:
    corpus_dir: str
    out_dir: str
    endpoint_url: str
    adapter: str = "generic"
    task_family: str = "understanding"
    split_rule: str = "official"
    split_n: int = 0
    target_rate: int = 22050
    crop_seed: int = 0
    seed: int = 0
    shard_size: int = 10_000
    save_clips: bool = False
    template_dir: str | None = None
    filters_path: str | None = None
    model_map: dict = field(default_factory=dict)
    api_key_env: str = "MUSETUNE_API_KEY"
    reasoning_track_cap: int = REASONING_TRACK_CAP
    jobs: int = 1

    def config_hash(self) -> str:
        # jobs is an operational knob: it never changes outputs, so it
        # must not invalidate resume checkpoints.
        fields = {k: v for k, v in asdict(self).items() if k != "jobs"}
        canon = json.dumps(fields, sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:16]

    @classmethod
    def from_json_file(cls, path) -> "PipelineConfig":
        return cls(**json.loads(Path(path).read_text()))


def read_jsonl(path) -> list[dict]:
    path = Path(path)
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def write_jsonl(path, objs) -> None:
    lines = [json.dumps(o, sort_keys=True, ensure_ascii=False) for o in objs]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def append_jsonl(path, obj) -> None:
    with open(path, "a") as fh:
        fh.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


# --------------------------------------------------------------- stages

def stage_ingest(
    corpus_dir, adapter: str, records_path,
    split_rule: str = "official", split_n: int = 0, seed: int = 0,
) -> int:
    """Adapter stream -> records.jsonl with split assignment."""
    records = list(ingest(corpus_dir, adapter))
    if split_rule == "random_n":
        records = assign_split(records, "random_n", n=split_n, seed=seed)
    write_jsonl(records_path, [r.to_json_dict() for r in records])
    return len(records)


def _all_crop_starts(track: AudioClip, clip_len_s: float) -> list[float]:
    starts = []
    pos = 0.0
    while track.duration_s - pos >= 1.0:  # ignore sub-second tails
        starts.append(pos)
        pos += clip_len_s
    return starts or [0.0]


def _window_notes(notes: list[dict], start_s: float, end_s: float) -> list[dict]:
    out = []
    for note in notes:
        if note.get("offset_s", 0) > start_s and note.get("onset_s", 0) < end_s:
            shifted = dict(note)
            shifted["onset_s"] = round(max(0.0, note["onset_s"] - start_s), 4)
            shifted["offset_s"] = round(min(end_s, note["offset_s"]) - start_s, 4)
            out.append(shifted)
    return out


def _ordered_parallel(fn, items, jobs: int):
    """Map with a worker pool, yielding results in input order so output
    files are byte-identical regardless of the job count."""
    if jobs <= 1:
        yield from map(fn, items)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            yield from pool.map(fn, items)


def stage_augment(
    records_path, augmented_path,
    policy: CropPolicy,
    target_rate: int = 22050,
    all_crops: bool = False,
    save_clips: bool = False,
    clips_dir=None,
    split: str = "train",
    jobs: int = 1,
) -> dict:
    """Decode, crop, estimate features, and emit one metadata doc per clip.

    Resumes from clip ids already present in the output file. Decode,
    crop, and estimator failures skip the track (logged), they never
    abort the stage. Tracks are independent, so ``jobs`` workers may run
    them concurrently; results merge in record order.
    """
    records = [TrackRecord.from_json_dict(d) for d in read_jsonl(records_path)]
    if split:
        records = [r for r in records if r.split == split]
    done = {d["clip_id"] for d in read_jsonl(augmented_path)}
    if save_clips:
        clips_dir = Path(clips_dir or Path(augmented_path).parent / "clips")
        clips_dir.mkdir(parents=True, exist_ok=True)

    def process(record: TrackRecord) -> tuple[list[dict], int, int]:
        try:
            track = decode_and_normalize(
                Path(record.audio_path).read_bytes(), target_rate, record.track_id
            )
        except (MusetuneError, OSError, ValueError) as exc:
            log.warning("decode failed for %s: %s", record.track_id, exc)
            return [], 0, 1

        if all_crops:
            clips = []
            for start in _all_crop_starts(track, policy.clip_len_s):
                i0 = int(start * track.sample_rate)
                i1 = min(i0 + int(policy.clip_len_s * track.sample_rate), len(track.samples))
                clips.append(AudioClip(record.track_id, track.samples[i0:i1],
                                       track.sample_rate, offset_s=start))
        else:
            try:
                clips = [crop_clip(track, policy)]
            except MusetuneError as exc:
                log.warning("crop failed for %s: %s", record.track_id, exc)
                return [], 0, 1

        entries = []
        n_failed = 0
        for clip in clips:
            clip_id = f"{clip.track_id}__{int(round(clip.offset_s * 1000))}"
            if clip_id in done:
                continue
            try:
                aug = augment_clip(clip)
            except MusetuneError as exc:
                log.warning("augment failed for %s: %s", clip_id, exc)
                n_failed += 1
                continue
            annotations = dict(record.annotations)
            if all_crops and "notes" in annotations:
                annotations["notes"] = _window_notes(
                    annotations["notes"], clip.offset_s, clip.offset_s + clip.duration_s
                )
            doc_record = TrackRecord(
                track_id=record.track_id, dataset_name=record.dataset_name,
                audio_path=record.audio_path, annotations=annotations, split=record.split,
            )
            if save_clips:
                clip_ref = save_clip(clip, clips_dir)
            else:
                clip_ref = f"{record.audio_path}#{int(round(clip.offset_s * 1000))}"
            entries.append({
                "clip_id": clip_id,
                "clip_ref": clip_ref,
                "dataset_name": record.dataset_name,
                "offset_s": clip.offset_s,
                "duration_s": round(clip.duration_s, 4),
                "doc": build_metadata_doc(doc_record, aug),
            })
        return entries, len(clips), n_failed

    n_cropped = 0
    n_failed = 0
    for entries, cropped, failed in _ordered_parallel(process, records, jobs):
        n_cropped += cropped
        n_failed += failed
        for entry in entries:
            append_jsonl(augmented_path, entry)

    return {"cropped": n_cropped, "augmented": len(read_jsonl(augmented_path)),
            "failures": n_failed}


def stage_generate(
    augmented_path, pairs_path,
    task_family: str,
    client: ChatClient,
    template: str | None = None,
    template_dir=None,
    model_map: dict | None = None,
    track_cap: int | None = None,
    seed: int = 0,
    jobs: int = 1,
) -> int:
    """One chat request per clip document; resumes per clip id.

    Requests are independent, so up to ``jobs`` are in flight at once;
    results merge deterministically in clip-id order.
    """
    if template is None:
        template = load_template(task_family, template_dir=template_dir)
    entries = sorted(read_jsonl(augmented_path), key=lambda d: d["clip_id"])
    if track_cap is not None and len(entries) > track_cap:
        rng = np.random.default_rng(seed)
        idx = sorted(rng.choice(len(entries), size=track_cap, replace=False).tolist())
        entries = [entries[i] for i in idx]
    done = {d["clip_id"] for d in read_jsonl(pairs_path)}
    pending = [e for e in entries if e["clip_id"] not in done]

    def process(entry: dict) -> dict:
        route = route_for(task_family, entry["doc"])
        pairs = generate_pairs(entry["doc"], task_family, template, route, client,
                               model_map=model_map)
        return {
            "clip_id": entry["clip_id"],
            "clip_ref": entry["clip_ref"],
            "dataset_name": entry["dataset_name"],
            "model_tier": route.model_tier,
            "pairs": [[q, a] for q, a in pairs],
        }

    for result in _ordered_parallel(process, pending, jobs):
        append_jsonl(pairs_path, result)
    return sum(len(d["pairs"]) for d in read_jsonl(pairs_path))


def stage_filter(
    pairs_path, kept_path, rejected_path,
    task_family: str,
    filters: FilterList | None = None,
) -> dict:
    """Apply the disallowed-phrase lists; write kept records and reasons."""
    filters = filters or FilterList()
    kept_objs = []
    rejected_objs = []
    for entry in sorted(read_jsonl(pairs_path), key=lambda d: d["clip_id"]):
        kept, rejected = filter_pairs([(q, a) for q, a in entry["pairs"]], filters)
        for j, (q, a) in enumerate(kept):
            rec = InstructionRecord(
                id=f"{entry['clip_id']}--{j}",
                dataset_name=entry["dataset_name"],
                task_family=task_family,
                clip_ref=entry["clip_ref"],
                query=q,
                response=a,
            )
            kept_objs.append(rec.to_json_dict())
        for (q, a), reason in rejected:
            rejected_objs.append({"clip_id": entry["clip_id"], "query": q,
                                  "response": a, "reason": reason})
    write_jsonl(kept_path, kept_objs)
    write_jsonl(rejected_path, rejected_objs)
    return {"kept": len(kept_objs), "rejected": len(rejected_objs)}


def stage_pack(kept_path, packed_dir, shard_size: int = 10_000, seed: int = 0) -> dict:
    records = [InstructionRecord.from_json_dict(d) for d in read_jsonl(kept_path)]
    return pack_dataset(records, packed_dir, shard_size=shard_size, seed=seed)


# --------------------------------------------------------------- full run

def run_pipeline(config: PipelineConfig) -> dict:
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    records_path = out / "records.jsonl"
    augmented_path = out / "augmented.jsonl"
    pairs_path = out / "pairs.jsonl"
    kept_path = out / "kept.jsonl"
    rejected_path = out / "rejected.jsonl"

    ledger = {"config_hash": config.config_hash(), "stages": {}}

    if not records_path.exists():
        stage_ingest(config.corpus_dir, config.adapter, records_path,
                     split_rule=config.split_rule, split_n=config.split_n,
                     seed=config.seed)
    ledger["stages"]["ingested"] = len(read_jsonl(records_path))

    all_crops = (config.adapter in ALL_CROPS_FOR_CAPTIONING
                 and config.task_family == "captioning")
    aug_stats = stage_augment(
        records_path, augmented_path,
        policy=CropPolicy(rng_seed=config.crop_seed),
        target_rate=config.target_rate,
        all_crops=all_crops,
        save_clips=config.save_clips,
        clips_dir=out / "clips",
        jobs=config.jobs,
    )
    ledger["stages"]["cropped"] = aug_stats["cropped"]
    ledger["stages"]["augmented"] = aug_stats["augmented"]
    ledger["stages"]["augment_failures"] = aug_stats["failures"]

    client = ChatClient(endpoint_url=config.endpoint_url,
                        api_key=os.environ.get(config.api_key_env))
    track_cap = config.reasoning_track_cap if config.task_family == "reasoning" else None
    filters = FilterList()
    if config.filters_path:
        filters = FilterList.from_json_dict(json.loads(Path(config.filters_path).read_text()))

    ledger["stages"]["generated_pairs"] = stage_generate(
        augmented_path, pairs_path, config.task_family, client,
        template_dir=config.template_dir,
        model_map=config.model_map or None,
        track_cap=track_cap, seed=config.seed, jobs=config.jobs,
    )
    filter_stats = stage_filter(pairs_path, kept_path, rejected_path,
                                config.task_family, filters)
    ledger["stages"]["filtered_out"] = filter_stats["rejected"]
    ledger["stages"]["kept"] = filter_stats["kept"]

    manifest = stage_pack(kept_path, out / "packed",
                          shard_size=config.shard_size, seed=config.seed)
    ledger["stages"]["packed"] = manifest["total_records"]
    (out / "ledger.json").write_text(json.dumps(ledger, indent=2, sort_keys=True))
    return ledger
