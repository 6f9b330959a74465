"""Uniform container for per-item metric results."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class MetricReport:
    metric_name: str
    per_item: list = field(default_factory=list)
    aggregation: str = "mean"

    @property
    def n(self) -> int:
        return len(self.per_item)

    @property
    def aggregate(self) -> float:
        if not self.per_item:
            return 0.0
        values = [float(v) for v in self.per_item]
        if self.aggregation == "mean":
            return float(np.mean(values))
        if self.aggregation == "sum":
            return float(np.sum(values))
        raise ValueError(f"unknown aggregation {self.aggregation!r}")

    def to_json_dict(self) -> dict:
        return {
            "metric": self.metric_name,
            "n": self.n,
            "aggregation": self.aggregation,
            "aggregate": self.aggregate,
            "per_item": [float(v) for v in self.per_item],
        }
