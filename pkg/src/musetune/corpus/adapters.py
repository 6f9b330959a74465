"""Corpus adapters: one per source layout, all yielding TrackRecords.

The ``generic`` adapter (WAV files plus JSON sidecars) is the desk-scale
workhorse; the named adapters parse the public corpus layouts only as far
as the fields the prompt templates use. Malformed rows are skipped and
logged rather than aborting the stream.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import Callable, Iterator

from .records import TrackRecord

log = logging.getLogger("musetune.corpus")

ADAPTERS: dict[str, Callable[[Path], Iterator[TrackRecord]]] = {}

# Adapters that crop every window of a track rather than one clip, used
# for note-annotated captioning sources.
ALL_CROPS_FOR_CAPTIONING = {"musicnet"}


def register(name: str):
    def deco(fn):
        ADAPTERS[name] = fn
        return fn
    return deco


def ingest(dataset_dir, adapter_name: str) -> Iterator[TrackRecord]:
    """Stream every track of a corpus through the named adapter."""
    if adapter_name not in ADAPTERS:
        raise ValueError(
            f"unknown adapter {adapter_name!r}; registered: {sorted(ADAPTERS)}"
        )
    root = Path(dataset_dir)
    seen: set[str] = set()
    for record in ADAPTERS[adapter_name](root):
        if record.track_id in seen:
            log.warning("duplicate track_id %s skipped", record.track_id)
            continue
        if not Path(record.audio_path).exists():
            log.warning("missing audio for %s: %s", record.track_id, record.audio_path)
            continue
        seen.add(record.track_id)
        yield record


@register("generic")
def _generic(root: Path) -> Iterator[TrackRecord]:
    """Directory of ``<id>.wav`` files with optional ``<id>.json`` sidecars."""
    for wav in sorted(root.glob("*.wav")):
        track_id = wav.stem
        annotations = {}
        sidecar = wav.with_suffix(".json")
        if sidecar.exists():
            try:
                annotations = json.loads(sidecar.read_text())
            except (json.JSONDecodeError, OSError) as exc:
                log.warning("malformed sidecar for %s: %s", track_id, exc)
                continue
        yield TrackRecord(
            track_id=track_id,
            dataset_name=root.name,
            audio_path=str(wav),
            annotations=annotations,
        )


def _csv_rows(path: Path, delimiter: str = ",") -> Iterator[dict]:
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.DictReader(fh, delimiter=delimiter)):
            yield i, row


@register("fma")
def _fma(root: Path) -> Iterator[TrackRecord]:
    """FMA-style layout: ``tracks.csv`` with per-track tags and genres."""
    meta = root / "tracks.csv"
    for i, row in _csv_rows(meta):
        try:
            track_id = row.pop("track_id")
            genres = [g for g in row.pop("genres", "").split("|") if g]
            tags = [t for t in row.pop("tags", "").split("|") if t]
        except KeyError as exc:
            log.warning("fma row %d missing %s; skipped", i, exc)
            continue
        annotations = {"genres": genres, "tags": tags, **row}
        yield TrackRecord(
            track_id=track_id,
            dataset_name="fma",
            audio_path=str(root / "audio" / f"{track_id}.wav"),
            annotations=annotations,
        )


@register("mtg_jamendo")
def _mtg_jamendo(root: Path) -> Iterator[TrackRecord]:
    """MTG-Jamendo-style TSV: TRACK_ID, ..., namespaced TAGS columns."""
    meta = root / "raw.tsv"
    with open(meta) as fh:
        header = fh.readline().rstrip("\n").split("\t")
        for i, line in enumerate(fh):
            parts = line.rstrip("\n").split("\t")
            if len(parts) < len(header):
                log.warning("jamendo row %d short; skipped", i)
                continue
            row = dict(zip(header, parts))
            tags = parts[len(header) - 1:]  # tag list spills past fixed columns
            annotations = {
                "genres": [t.split("---", 1)[1] for t in tags if t.startswith("genre---")],
                "instruments": [t.split("---", 1)[1] for t in tags if t.startswith("instrument---")],
                "moods": [t.split("---", 1)[1] for t in tags if t.startswith("mood/theme---")],
                "artist_id": row.get("ARTIST_ID", ""),
            }
            track_id = row["TRACK_ID"]
            yield TrackRecord(
                track_id=track_id,
                dataset_name="mtg_jamendo",
                audio_path=str(root / "audio" / f"{track_id}.wav"),
                annotations=annotations,
            )


@register("magnatagatune")
def _magnatagatune(root: Path) -> Iterator[TrackRecord]:
    """MagnaTagATune-style TSV of binary tag columns per clip."""
    meta = root / "annotations_final.csv"
    for i, row in _csv_rows(meta, delimiter="\t"):
        try:
            track_id = row.pop("clip_id")
            path = row.pop("mp3_path", f"{track_id}.wav")
        except KeyError as exc:
            log.warning("magnatagatune row %d missing %s; skipped", i, exc)
            continue
        tags = [tag for tag, v in row.items() if v == "1"]
        yield TrackRecord(
            track_id=track_id,
            dataset_name="magnatagatune",
            audio_path=str(root / "audio" / Path(path).with_suffix(".wav").name),
            annotations={"tags": tags},
        )


@register("musicnet")
def _musicnet(root: Path) -> Iterator[TrackRecord]:
    """MusicNet-style layout: ``<id>.wav`` plus ``<id>_labels.csv`` note events.

    Label rows carry (start_time, end_time, instrument, note) with times in
    sample counts at 44.1 kHz; they become per-note (onset, offset, pitch,
    instrument) events.
    """
    for wav in sorted(root.glob("*.wav")):
        track_id = wav.stem
        labels = root / f"{track_id}_labels.csv"
        notes = []
        if labels.exists():
            try:
                for _, row in _csv_rows(labels):
                    notes.append({
                        "onset_s": round(int(row["start_time"]) / 44100.0, 4),
                        "offset_s": round(int(row["end_time"]) / 44100.0, 4),
                        "pitch": int(row["note"]),
                        "instrument": row["instrument"],
                    })
            except (KeyError, ValueError) as exc:
                log.warning("musicnet labels for %s malformed: %s", track_id, exc)
                continue
        yield TrackRecord(
            track_id=track_id,
            dataset_name="musicnet",
            audio_path=str(wav),
            annotations={"notes": notes},
        )


@register("musiccaps")
def _musiccaps(root: Path) -> Iterator[TrackRecord]:
    """MusicCaps-style CSV: ytid, start_s, caption, aspect_list."""
    for i, row in _csv_rows(root / "musiccaps.csv"):
        try:
            ytid = row.pop("ytid")
            caption = row.pop("caption")
        except KeyError as exc:
            log.warning("musiccaps row %d missing %s; skipped", i, exc)
            continue
        annotations = {"caption": caption, **row}
        yield TrackRecord(
            track_id=ytid,
            dataset_name="musiccaps",
            audio_path=str(root / "audio" / f"{ytid}.wav"),
            annotations=annotations,
        )


@register("yt8m_mtc")
def _yt8m_mtc(root: Path) -> Iterator[TrackRecord]:
    """YT8M music-text-clips CSV; the whole corpus is a training split."""
    for i, row in _csv_rows(root / "clips.csv"):
        try:
            vid = row.pop("video_id")
            caption = row.pop("caption")
        except KeyError as exc:
            log.warning("yt8m row %d missing %s; skipped", i, exc)
            continue
        yield TrackRecord(
            track_id=vid,
            dataset_name="yt8m_mtc",
            audio_path=str(root / "audio" / f"{vid}.wav"),
            annotations={"caption": caption, **row},
            split="train",
        )
