from .adapters import ADAPTERS, ALL_CROPS_FOR_CAPTIONING, ingest
from .records import CorpusManifest, TrackRecord
from .splits import assign_split
from .tally import tally

__all__ = [
    "ADAPTERS",
    "ALL_CROPS_FOR_CAPTIONING",
    "CorpusManifest",
    "TrackRecord",
    "assign_split",
    "ingest",
    "tally",
]
