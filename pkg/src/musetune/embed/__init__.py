from .matfile import read_embd, write_embd
from .pooling import EmbeddingMatrix, pool_frames, pool_global_mean, window_indices

__all__ = [
    "EmbeddingMatrix",
    "pool_frames",
    "pool_global_mean",
    "read_embd",
    "window_indices",
    "write_embd",
]
