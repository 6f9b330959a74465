"""Build an instruction dataset end to end against the bundled stub endpoint.

Creates a tiny synthetic corpus (WAV + JSON sidecars), runs
ingest -> crop -> augment -> generate -> filter -> pack, and prints the
stage ledger plus a couple of packed records.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from musetune.audio import write_wav
from musetune.instruct import StubLLMServer
from musetune.pipeline import PipelineConfig, run_pipeline

SR = 22050
work = Path(tempfile.mkdtemp(prefix="musetune-demo-"))
corpus = work / "corpus"
corpus.mkdir()

for i in range(5):
    shift = (5 * i) % 12
    t = np.arange(SR * 8) / SR
    mix = sum(np.sin(2 * np.pi * 440.0 * 2 ** ((m + shift - 69) / 12) * t)
              for m in (60, 64, 67))
    mix /= np.abs(mix).max()
    clicks = np.zeros_like(mix)
    clicks[:: SR // 2] = 1.0
    samples = 0.7 * mix + 0.3 * clicks
    (corpus / f"track{i}.wav").write_bytes(write_wav(samples / np.abs(samples).max(), SR))
    (corpus / f"track{i}.json").write_text(json.dumps({"tags": ["synthetic", "demo"]}))

stub = StubLLMServer(pairs_per_reply=3).start()
try:
    config = PipelineConfig(
        corpus_dir=str(corpus),
        out_dir=str(work / "out"),
        endpoint_url=stub.url,
        adapter="generic",
        task_family="understanding",
        target_rate=SR,
        seed=1,
    )
    ledger = run_pipeline(config)
finally:
    stub.stop()

print("stage ledger:")
for stage, count in ledger["stages"].items():
    print(f"  {stage:18s} {count}")

shard = work / "out" / "packed" / "shard-00000.jsonl"
print("\nfirst two packed records:")
for line in shard.read_text().splitlines()[:2]:
    record = json.loads(line)
    print(f"  Q: {record['query']}")
    print(f"  A: {record['response']}\n")
print(f"outputs under {work}/out")
