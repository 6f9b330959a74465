"""Prompt template loading.

Templates are plain-text assets keyed by (dataset, task family); a
dataset-specific file ``<dataset>__<task>.txt`` wins over the per-task
default. Operators can point ``template_dir`` at their own assets.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .generate import TASK_FAMILIES


def load_template(task_family: str, dataset: str | None = None, template_dir=None) -> str:
    if task_family not in TASK_FAMILIES:
        raise ValueError(f"unknown task family {task_family!r}")
    names = []
    if dataset:
        names.append(f"{dataset}__{task_family}.txt")
    names.append(f"{task_family}.txt")

    if template_dir is not None:
        root = Path(template_dir)
        for name in names:
            path = root / name
            if path.exists():
                return path.read_text()

    assets = resources.files("musetune.assets.prompts")
    for name in names:
        candidate = assets / name
        if candidate.is_file():
            return candidate.read_text()
    raise FileNotFoundError(f"no template for task {task_family!r}")
