"""Train/test split assignment."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from ..errors import NotEnoughTracksError
from .records import TrackRecord


def assign_split(records: Iterable[TrackRecord], rule: str, **kwargs) -> list[TrackRecord]:
    """Assign splits in place and return the records as a list.

    Rules:
      - ``official``: test ids listed explicitly (``test_ids=...``);
        everything else is train.
      - ``random_n``: a seeded draw of exactly ``n`` test tracks
        (``n=..., seed=...``), deterministic for a given seed.
    """
    records = list(records)
    if rule == "official":
        test_ids = set(kwargs.get("test_ids", ()))
        for r in records:
            r.split = "test" if r.track_id in test_ids else "train"
    elif rule == "random_n":
        n = int(kwargs["n"])
        seed = int(kwargs.get("seed", 0))
        if n > len(records):
            raise NotEnoughTracksError(f"need {n} test tracks, corpus has {len(records)}")
        ids = sorted(r.track_id for r in records)
        rng = np.random.default_rng(seed)
        test_ids = set(rng.permutation(ids)[:n].tolist())
        for r in records:
            r.split = "test" if r.track_id in test_ids else "train"
    else:
        raise ValueError(f"unknown split rule {rule!r}")
    return records
