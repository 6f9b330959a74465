"""Offline stand-in for a chat-completion endpoint.

Speaks the same wire format as the real thing and synthesizes
deterministic Q/A blocks from the metadata document it receives, so
pipeline runs are reproducible without network access. Canned replies can
be registered per exact user message for replay-style tests.
"""

from __future__ import annotations

import hashlib
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer


def _doc_field(doc: dict, name: str):
    if name in doc:
        return doc[name]
    return doc.get(f"augmented.{name}")


def synthesize_reply(user_content: str, pairs: int = 3, tainted: int = 0) -> str:
    """Deterministic Q/A blocks derived from a metadata JSON document."""
    try:
        doc = json.loads(user_content)
        if not isinstance(doc, dict):
            doc = {}
    except json.JSONDecodeError:
        doc = {}

    tempo = _doc_field(doc, "tempo_bpm")
    key = _doc_field(doc, "key")
    chords = _doc_field(doc, "chords") or []
    tags = doc.get("tags") or doc.get("genres") or []

    candidates = []
    if tempo is not None:
        candidates.append(("What is the tempo of this piece?",
                           f"The tempo is around {tempo} BPM."))
    if key is not None:
        candidates.append(("What key is this piece in?",
                           f"The piece is in {key}."))
    if chords:
        labels = ", ".join(sorted({c[2] for c in chords if len(c) == 3}))
        candidates.append(("Which chords feature prominently?",
                           f"The harmony centers on {labels}."))
    if tags:
        candidates.append(("How would you characterize the style?",
                           f"It has a {', '.join(map(str, tags[:3]))} character."))
    candidates.append(("What is the overall feel of this piece?",
                       "A steady pulse with a clear tonal center."))

    blocks = []
    for i in range(max(0, pairs - tainted)):
        q, a = candidates[i % len(candidates)]
        if i >= len(candidates):
            q = q[:-1] + f" (part {i // len(candidates) + 1})?"
        blocks.append(f"Q: {q}\nA: {a}")
    for _ in range(tainted):
        blocks.append("Q: What stands out in this piece?\n"
                      "A: Based on the provided metadata, the tempo stands out.")
    return "\n\n".join(blocks)


def judge_reply(user_content: str) -> str:
    """Pick the longer of two presented responses (a crude detail proxy)."""
    marker_a, marker_b = "Response A:", "Response B:"
    ia = user_content.find(marker_a)
    ib = user_content.find(marker_b)
    if ia < 0 or ib < 0:
        return "A"
    text_a = user_content[ia + len(marker_a):ib]
    text_b = user_content[ib + len(marker_b):]
    return "A" if len(text_a.split()) >= len(text_b.split()) else "B"


class StubLLMServer:
    def __init__(
        self,
        port: int = 0,
        pairs_per_reply: int = 3,
        tainted_per_reply: int = 0,
        canned: dict[str, str] | None = None,
        fail_first: int = 0,
    ):
        self.pairs_per_reply = pairs_per_reply
        self.tainted_per_reply = tainted_per_reply
        self.canned = canned or {}
        self._fail_remaining = fail_first
        self._lock = threading.Lock()
        self.request_count = 0

        stub = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                payload = json.loads(self.rfile.read(length) or b"{}")
                with stub._lock:
                    stub.request_count += 1
                    if stub._fail_remaining > 0:
                        stub._fail_remaining -= 1
                        self.send_response(503)
                        self.end_headers()
                        return
                content = stub.reply_for(payload)
                body = json.dumps(
                    {"choices": [{"message": {"role": "assistant", "content": content}}]}
                ).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._thread: threading.Thread | None = None

    def reply_for(self, payload: dict) -> str:
        user = ""
        system = ""
        for message in payload.get("messages", []):
            if message.get("role") == "user":
                user = message.get("content", "")
            elif message.get("role") == "system":
                system = message.get("content", "")
        digest = hashlib.sha256(user.encode()).hexdigest()
        if digest in self.canned:
            return self.canned[digest]
        if user in self.canned:
            return self.canned[user]
        if "Response A:" in user and "Response B:" in user:
            return judge_reply(user)
        del system
        return synthesize_reply(user, self.pairs_per_reply, self.tainted_per_reply)

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}/v1/chat/completions"

    def start(self) -> "StubLLMServer":
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self._server.shutdown()
        self._server.server_close()
        if self._thread:
            self._thread.join(timeout=5)

    def serve_forever(self):
        self._server.serve_forever()
