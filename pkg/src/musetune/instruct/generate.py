"""Query/response generation through a chat-completion endpoint."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from ..errors import ReplyParseError, TemplateError
from .client import ChatClient

log = logging.getLogger("musetune.instruct")

TASK_FAMILIES = ("understanding", "captioning", "reasoning")
MODEL_TIERS = ("standard", "long_context", "large")

DEFAULT_MODEL_MAP = {
    "standard": "gpt-3.5-turbo",
    "long_context": "gpt-3.5-turbo-16k",
    "large": "gpt-4",
}

# Characters-per-token approximation used for the context-budget routing.
CHARS_PER_TOKEN = 4
DEFAULT_TOKEN_BUDGET = 3000

# Tracks fed to the expensive tier per dataset when generating reasoning data.
REASONING_TRACK_CAP = 25_000

METADATA_PLACEHOLDER = "{metadata}"
# The doc travels as the user message, so the placeholder in the system
# template is rewritten to point there.
_PLACEHOLDER_SUBSTITUTE = "provided as the JSON document in the user message"


@dataclass
class GenerationRoute:
    """Which model tier serves a request."""

    task_family: str
    model_tier: str
    max_tracks: int | None = None

    def __post_init__(self):
        if self.task_family not in TASK_FAMILIES:
            raise ValueError(f"unknown task family {self.task_family!r}")
        if self.model_tier not in MODEL_TIERS:
            raise ValueError(f"unknown model tier {self.model_tier!r}")
        if self.task_family == "reasoning" and self.model_tier != "large":
            raise ValueError("reasoning requests must use the large tier")


def route_for(task_family: str, doc: str, token_budget: int = DEFAULT_TOKEN_BUDGET) -> GenerationRoute:
    """Pick the model tier for one request.

    Reasoning always takes the large tier; otherwise documents whose
    approximate token count exceeds the standard budget take the
    long-context tier.
    """
    if task_family == "reasoning":
        return GenerationRoute(task_family, "large", max_tracks=REASONING_TRACK_CAP)
    if len(doc) / CHARS_PER_TOKEN > token_budget:
        return GenerationRoute(task_family, "long_context")
    return GenerationRoute(task_family, "standard")


def parse_reply(reply: str) -> tuple[list[tuple[str, str]], list[str]]:
    """Parse generator output under the strict block grammar.

    Valid blocks are ``Q: <text>`` followed by ``A: <text>`` (the answer
    may continue on further lines), separated by blank lines. Malformed
    blocks yield an error message instead of a pair.
    """
    pairs: list[tuple[str, str]] = []
    errors: list[str] = []
    blocks = [b for b in reply.replace("\r\n", "\n").split("\n\n") if b.strip()]
    for i, block in enumerate(blocks):
        lines = [ln for ln in block.split("\n") if ln.strip()]
        if len(lines) < 2 or not lines[0].startswith("Q: ") or not lines[1].startswith("A: "):
            errors.append(f"block {i}: expected 'Q: ...' then 'A: ...'")
            continue
        query = lines[0][3:].strip()
        answer = " ".join([lines[1][3:].strip()] + [ln.strip() for ln in lines[2:]]).strip()
        if not query or not answer:
            errors.append(f"block {i}: empty query or answer")
            continue
        pairs.append((query, answer))
    return pairs, errors


def generate_pairs(
    doc: str,
    task_family: str,
    prompt_template: str,
    route: GenerationRoute,
    client: ChatClient,
    model_map: dict[str, str] | None = None,
) -> list[tuple[str, str]]:
    """Issue one chat request for a metadata doc and parse the reply.

    Raises EndpointError if the endpoint stays unreachable after retries;
    grammar violations are logged per block and yield fewer pairs.
    """
    if METADATA_PLACEHOLDER not in prompt_template:
        raise TemplateError(f"template lacks the {METADATA_PLACEHOLDER} placeholder")
    if route.task_family != task_family:
        raise ValueError("route/task mismatch")

    model_map = model_map or DEFAULT_MODEL_MAP
    system = prompt_template.replace(METADATA_PLACEHOLDER, _PLACEHOLDER_SUBSTITUTE)
    reply = client.complete(model=model_map[route.model_tier], system=system, user=doc)
    pairs, errors = parse_reply(reply)
    for err in errors:
        log.warning("%s", ReplyParseError(err))
    return pairs
