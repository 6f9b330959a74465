"""Pool high-rate encoder embeddings into 100 ms frames.

A 25 s clip encoded at 345 Hz x 4800 dims carries ~41.4M values; pooling
within 100 ms windows keeps temporal structure at 1.2M values (250 x 4800).
"""

import numpy as np

from musetune.embed import EmbeddingMatrix, pool_frames, pool_global_mean

rng = np.random.default_rng(0)
emb = EmbeddingMatrix(rng.normal(size=(8625, 4800)).astype(np.float32), frame_rate_hz=345.0)
print(f"input : {emb.frames} x {emb.dims} @ {emb.frame_rate_hz:g} Hz "
      f"({emb.data.size:,} values)")

pooled = pool_frames(emb, frame_len_s=0.1)
print(f"pooled: {pooled.frames} x {pooled.dims} @ {pooled.frame_rate_hz:g} Hz "
      f"({pooled.data.size:,} values)")

# windows alternate 35/34 rows because 345 Hz x 0.1 s = 34.5
counts = np.bincount(np.floor(np.arange(emb.frames) / 34.5).astype(int))
print(f"window sizes: {sorted(set(counts.tolist()))} (first five: {counts[:5].tolist()})")

# the time-collapsing baseline loses all temporal structure
vec = pool_global_mean(emb)
print(f"global mean baseline: {vec.shape[0]} values")
