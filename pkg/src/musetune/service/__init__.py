from .server import EvalService
from .store import StudyStore

__all__ = ["EvalService", "StudyStore"]
