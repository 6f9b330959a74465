from .client import ChatClient
from .docbuild import build_metadata_doc
from .filters import DEFAULT_QUERY_PHRASES, DEFAULT_RESPONSE_PHRASES, FilterList, filter_pairs
from .generate import (
    DEFAULT_MODEL_MAP,
    REASONING_TRACK_CAP,
    TASK_FAMILIES,
    GenerationRoute,
    generate_pairs,
    parse_reply,
    route_for,
)
from .pack import InstructionRecord, pack_dataset
from .prompts import load_template
from .stub import StubLLMServer, synthesize_reply

__all__ = [
    "ChatClient",
    "DEFAULT_MODEL_MAP",
    "DEFAULT_QUERY_PHRASES",
    "DEFAULT_RESPONSE_PHRASES",
    "FilterList",
    "GenerationRoute",
    "InstructionRecord",
    "REASONING_TRACK_CAP",
    "StubLLMServer",
    "TASK_FAMILIES",
    "build_metadata_doc",
    "filter_pairs",
    "generate_pairs",
    "load_template",
    "pack_dataset",
    "parse_reply",
    "route_for",
    "synthesize_reply",
]
