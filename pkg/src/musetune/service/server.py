"""HTTP front end for the study store.

Endpoints:
  POST /api/studies                       upload a study definition
  GET  /api/studies/{id}/items/next?rater=R   next unjudged item (keys stripped)
  POST /api/judgments                     submit one judgment
  GET  /api/studies/{id}/results          analysis over the persisted log
  GET  /media/{path}                      static audio under the media root
  GET  /app/{path}                        optional static UI assets
"""

from __future__ import annotations

import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from ..errors import (
    DomainError,
    DuplicateJudgmentError,
    MusetuneError,
    UnknownStudyError,
    ValidationError,
)
from ..study import Judgment
from .store import StudyStore

_STATUS = {
    ValidationError: 400,
    DomainError: 400,
    DuplicateJudgmentError: 409,
    UnknownStudyError: 404,
}


class EvalService:
    def __init__(self, store: StudyStore, port: int = 0,
                 media_root=None, ui_root=None):
        self.store = store
        self.media_root = Path(media_root).resolve() if media_root else None
        self.ui_root = Path(ui_root).resolve() if ui_root else None
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send_json(self, obj, status=200):
                body = json.dumps(obj).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.end_headers()
                self.wfile.write(body)

            def _send_file(self, root: Path, rel: str):
                target = (root / rel).resolve()
                if not str(target).startswith(str(root)) or not target.is_file():
                    self._send_json({"error": "not found"}, 404)
                    return
                body = target.read_bytes()
                ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
                self.send_response(200)
                self.send_header("Content-Type", ctype)
                self.send_header("Content-Length", str(len(body)))
                self.send_header("Access-Control-Allow-Origin", "*")
                self.end_headers()
                self.wfile.write(body)

            def do_OPTIONS(self):
                self.send_response(204)
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.end_headers()

            def do_GET(self):
                parsed = urlparse(self.path)
                parts = [p for p in parsed.path.split("/") if p]
                try:
                    if len(parts) == 5 and parts[:2] == ["api", "studies"] \
                            and parts[3:] == ["items", "next"]:
                        rater = parse_qs(parsed.query).get("rater", [""])[0]
                        if not rater:
                            self._send_json({"error": "rater query parameter required"}, 400)
                            return
                        view = service.store.next_item(parts[2], rater)
                        self._send_json({"done": True} if view is None
                                        else {"done": False, "item": view})
                    elif len(parts) == 4 and parts[:2] == ["api", "studies"] \
                            and parts[3] == "results":
                        self._send_json(service.store.results(parts[2]))
                    elif parts and parts[0] == "media" and service.media_root:
                        self._send_file(service.media_root, "/".join(parts[1:]))
                    elif parts and parts[0] == "app" and service.ui_root:
                        rel = "/".join(parts[1:]) or "index.html"
                        self._send_file(service.ui_root, rel)
                    else:
                        self._send_json({"error": "not found"}, 404)
                except MusetuneError as exc:
                    self._send_json({"error": str(exc)}, _STATUS.get(type(exc), 500))

            def do_POST(self):
                parsed = urlparse(self.path)
                parts = [p for p in parsed.path.split("/") if p]
                length = int(self.headers.get("Content-Length", 0))
                try:
                    payload = json.loads(self.rfile.read(length) or b"null")
                except json.JSONDecodeError:
                    self._send_json({"error": "invalid JSON body"}, 400)
                    return
                try:
                    if parts == ["api", "studies"]:
                        study_id = service.store.upload_study(payload["items"])
                        self._send_json({"study_id": study_id}, 201)
                    elif parts == ["api", "judgments"]:
                        study_id = payload["study_id"]
                        judgment = Judgment(
                            item_id=payload["item_id"],
                            rater_id=payload["rater_id"],
                            value=payload["value"],
                            screening_answer=payload.get("screening_answer"),
                        )
                        self._send_json(service.store.submit_judgment(study_id, judgment))
                    else:
                        self._send_json({"error": "not found"}, 404)
                except MusetuneError as exc:
                    self._send_json({"error": str(exc)}, _STATUS.get(type(exc), 500))
                except (KeyError, TypeError) as exc:
                    self._send_json({"error": f"missing field: {exc}"}, 400)

        self._server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._thread: threading.Thread | None = None

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "EvalService":
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
