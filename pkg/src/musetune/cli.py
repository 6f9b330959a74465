"""Command-line interface: every pipeline stage, metric suite, and study
workflow as a subcommand."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import evalsuite
from .audio import CropPolicy
from .embed import pool_frames, pool_global_mean, read_embd, write_embd
from .instruct import ChatClient, FilterList, StubLLMServer
from .pipeline import (
    PipelineConfig,
    read_jsonl,
    run_pipeline,
    stage_augment,
    stage_filter,
    stage_generate,
    stage_ingest,
    stage_pack,
)
from .service import EvalService, StudyStore
from .study import (
    Judgment,
    StudyItem,
    analyze,
    build_matching_study,
    build_pairwise_study,
    run_llm_judge,
)

log = logging.getLogger("musetune")


def _write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True))


def _client_from_args(args) -> ChatClient:
    return ChatClient(
        endpoint_url=args.endpoint,
        api_key=os.environ.get("MUSETUNE_API_KEY"),
    )


def _cmd_run(args):
    config = PipelineConfig.from_json_file(args.config)
    if args.seed is not None:
        config.seed = args.seed
    ledger = run_pipeline(config)
    print(json.dumps(ledger, indent=2, sort_keys=True))


def _cmd_ingest(args):
    n = stage_ingest(args.dataset_dir, args.adapter, args.out,
                     split_rule=args.split_rule, split_n=args.split_n,
                     seed=args.seed or 0)
    print(f"ingested {n} tracks -> {args.out}")


def _cmd_augment(args):
    policy = CropPolicy(rng_seed=args.crop_seed)
    stats = stage_augment(args.records, args.out, policy,
                          target_rate=args.target_rate,
                          all_crops=args.all_crops,
                          save_clips=args.save_clips,
                          clips_dir=args.clips_dir,
                          split=args.split,
                          jobs=args.jobs)
    print(json.dumps(stats))


def _cmd_generate(args):
    model_map = json.loads(Path(args.model_map).read_text()) if args.model_map else None
    n = stage_generate(args.augmented, args.out, args.task,
                       _client_from_args(args),
                       template_dir=args.template_dir,
                       model_map=model_map,
                       track_cap=args.track_cap,
                       seed=args.seed or 0,
                       jobs=args.jobs)
    print(f"{n} pairs -> {args.out}")


def _cmd_filter(args):
    filters = None
    if args.filters:
        filters = FilterList.from_json_dict(json.loads(Path(args.filters).read_text()))
    stats = stage_filter(args.pairs, args.kept, args.rejected, args.task, filters)
    print(json.dumps(stats))


def _cmd_pack(args):
    manifest = stage_pack(args.kept, args.out_dir,
                          shard_size=args.shard_size, seed=args.seed or 0)
    print(json.dumps(manifest, indent=2, sort_keys=True))


def _cmd_pool(args):
    emb = read_embd(args.input)
    if args.global_mean:
        vec = pool_global_mean(emb)
        Path(args.output).write_bytes(vec.astype("<f8").tobytes())
        print(f"global mean ({len(vec)} dims) -> {args.output}")
    else:
        pooled = pool_frames(emb, frame_len_s=args.frame_len)
        write_embd(args.output, pooled)
        print(f"{emb.frames}x{emb.dims} @{emb.frame_rate_hz:g}Hz -> "
              f"{pooled.frames}x{pooled.dims} @{pooled.frame_rate_hz:g}Hz")


def _cmd_eval(args):
    predictions = read_jsonl(args.predictions)
    references = read_jsonl(args.references) if args.references else []
    if args.task == "key":
        report = evalsuite.eval_key(predictions, references)
    elif args.task == "tempo":
        report = evalsuite.eval_tempo(predictions, references)
    elif args.task == "genre":
        labels = json.loads(Path(args.labels).read_text()) if args.labels else None
        report = evalsuite.eval_genre(predictions, references, labels=labels)
    elif args.task == "instrument":
        report = evalsuite.eval_instrument(predictions, references)
    elif args.task == "captions":
        report = evalsuite.eval_captions(predictions, references)
    elif args.task == "tokens":
        report = evalsuite.eval_tokens(predictions)
    elif args.task == "probe":
        report = evalsuite.eval_probe(predictions)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(args.task)
    if args.out:
        _write_json(args.out, report)
    print(evalsuite.format_table(report))


def _cmd_study_build(args):
    if args.kind == "pairwise":
        outputs = json.loads(Path(args.outputs).read_text())
        items = build_pairwise_study(outputs, args.subject, args.n,
                                     seed=args.seed or 0, screening=args.screening)
    else:
        rows = read_jsonl(args.outputs)
        outputs = {(r["model"], r["prompt"], r["audio"]): r["text"] for r in rows}
        items = build_matching_study(outputs, seed=args.seed or 0)
        if args.n:
            items = items[: args.n]
    _write_json(args.out, {"items": [i.to_json_dict() for i in items]})
    print(f"{len(items)} items -> {args.out}")


def _cmd_study_serve(args):
    store = StudyStore(args.log_path)
    for path in args.study or []:
        study_id = store.upload_study(json.loads(Path(path).read_text())["items"])
        print(f"loaded {path} as study {study_id}")
    service = EvalService(store, port=args.port,
                          media_root=args.media_root, ui_root=args.ui_root)
    print(f"serving on {service.url}")
    try:
        service.serve_forever()
    except KeyboardInterrupt:
        pass


def _cmd_study_analyze(args):
    items = [StudyItem.from_json_dict(d)
             for d in json.loads(Path(args.study).read_text())["items"]]
    judgments = [Judgment.from_json_dict(d) for d in read_jsonl(args.judgments)]
    report = analyze(judgments, items)
    if args.out:
        _write_json(args.out, report)
    print(json.dumps(report, indent=2, sort_keys=True))


def _cmd_study_judge(args):
    items = [StudyItem.from_json_dict(d)
             for d in json.loads(Path(args.items).read_text())["items"]]
    judgments = run_llm_judge(items, _client_from_args(args), model=args.model)
    with open(args.out, "w") as fh:
        for j in judgments:
            fh.write(json.dumps(j.to_json_dict(), sort_keys=True) + "\n")
    print(f"{len(judgments)} judgments -> {args.out}")


def _cmd_stub_llm(args):
    stub = StubLLMServer(port=args.port, pairs_per_reply=args.pairs,
                         tainted_per_reply=args.tainted)
    print(f"stub chat-completion endpoint on {stub.url}")
    try:
        stub.serve_forever()
    except KeyboardInterrupt:
        pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="musetune")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run the full pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("ingest", help="corpus adapter -> records.jsonl")
    p.add_argument("--dataset-dir", required=True)
    p.add_argument("--adapter", default="generic")
    p.add_argument("--out", required=True)
    p.add_argument("--split-rule", choices=["official", "random_n"], default="official")
    p.add_argument("--split-n", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("augment", help="crop clips and estimate music features")
    p.add_argument("--records", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--crop-seed", type=int, default=0)
    p.add_argument("--target-rate", type=int, default=22050)
    p.add_argument("--all-crops", action="store_true")
    p.add_argument("--save-clips", action="store_true")
    p.add_argument("--clips-dir", default=None)
    p.add_argument("--split", default="train")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("generate", help="produce Q/A pairs via a chat endpoint")
    p.add_argument("--augmented", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--task", choices=["understanding", "captioning", "reasoning"],
                   required=True)
    p.add_argument("--endpoint", required=True)
    p.add_argument("--model-map", default=None)
    p.add_argument("--template-dir", default=None)
    p.add_argument("--track-cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("filter", help="drop pairs containing disallowed phrases")
    p.add_argument("--pairs", required=True)
    p.add_argument("--kept", required=True)
    p.add_argument("--rejected", required=True)
    p.add_argument("--task", choices=["understanding", "captioning", "reasoning"],
                   required=True)
    p.add_argument("--filters", default=None)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("pack", help="shard filtered records + manifest")
    p.add_argument("--kept", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--shard-size", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_pack)

    p = sub.add_parser("pool", help="mean-pool an embedding matrix file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--frame-len", type=float, default=0.1)
    p.add_argument("--global-mean", action="store_true")
    p.set_defaults(func=_cmd_pool)

    p = sub.add_parser("eval", help="score predictions against references")
    p.add_argument("task", choices=["key", "tempo", "genre", "instrument",
                                    "captions", "tokens", "probe"])
    p.add_argument("--predictions", required=True)
    p.add_argument("--references", default=None)
    p.add_argument("--labels", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_eval)

    study = sub.add_parser("study", help="human/LLM evaluation workflows")
    study_sub = study.add_subparsers(dest="study_command", required=True)

    p = study_sub.add_parser("build", help="construct study items")
    p.add_argument("kind", choices=["pairwise", "matching"])
    p.add_argument("--outputs", required=True)
    p.add_argument("--subject", default=None)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--screening", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_study_build)

    p = study_sub.add_parser("serve", help="host studies for raters")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--media-root", default=None)
    p.add_argument("--ui-root", default=None)
    p.add_argument("--log-path", required=True)
    p.add_argument("--study", action="append", default=None)
    p.set_defaults(func=_cmd_study_serve)

    p = study_sub.add_parser("analyze", help="offline analysis of a judgment log")
    p.add_argument("--study", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_study_analyze)

    p = study_sub.add_parser("judge-llm", help="LLM musical-detail comparison")
    p.add_argument("--items", required=True)
    p.add_argument("--endpoint", required=True)
    p.add_argument("--model", default="gpt-4")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_study_judge)

    p = sub.add_parser("stub-llm", help="offline chat-completion stand-in")
    p.add_argument("--port", type=int, default=8089)
    p.add_argument("--pairs", type=int, default=3)
    p.add_argument("--tainted", type=int, default=0)
    p.set_defaults(func=_cmd_stub_llm)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except Exception as exc:
        stage = getattr(args, "command", "?")
        print(f"error in {stage}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
