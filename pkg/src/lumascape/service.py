"""Co-creation HTTP service.

Serves the lightscape document with optimistic concurrency: GETs read an
immutable snapshot, PUT validates the replacement, requires the current
revision token, writes atomically (temp file + rename), and bumps the
revision.  A crash between validate and rename leaves the old file intact.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .errors import InputError, LumascapeError, ValidationError
from .model import deserialize, deserialize_analysis, serialize, \
    serialize_palette
from .render import FixtureConfig, default_venue, frames_to_raw, render_all


class DocumentStore:
    """Revision-tracked lightscape document bound to a file on disk."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        data = self.path.read_bytes()
        self._document = deserialize(data)
        self._bytes = serialize(self._document)
        self._revision = 1

    def snapshot(self) -> tuple[int, bytes]:
        with self._lock:
            return self._revision, self._bytes

    @property
    def document(self):
        with self._lock:
            return self._document

    def replace(self, revision: int, document_node: dict) -> int:
        """Validate, check revision, persist atomically; returns new revision."""
        candidate_bytes = serialize(deserialize(json.dumps(document_node)))
        with self._lock:
            if revision != self._revision:
                raise StaleRevision(self._revision)
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            tmp.write_bytes(candidate_bytes)
            tmp.replace(self.path)
            self._document = deserialize(candidate_bytes)
            self._bytes = candidate_bytes
            self._revision += 1
            return self._revision


class StaleRevision(LumascapeError):
    code = "stale-revision"

    def __init__(self, current: int):
        super().__init__(f"document is at revision {current}")
        self.current = current


def make_server(lightscape_path, audio_path=None, analysis_path=None,
                fixtures: FixtureConfig | None = None, ui_dir=None,
                host="127.0.0.1", port=8787) -> ThreadingHTTPServer:
    store = DocumentStore(lightscape_path)
    venue = fixtures or default_venue()
    audio_bytes = Path(audio_path).read_bytes() if audio_path else None
    analysis_bytes = None
    if analysis_path:
        analysis_bytes = Path(analysis_path).read_bytes()
        deserialize_analysis(analysis_bytes)  # fail fast on bad documents
    ui_root = Path(ui_dir).resolve() if ui_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "lumascape"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        def _send(self, status, body: bytes, content_type="application/json"):
            self.send_response(status)
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, PUT, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()
            self.wfile.write(body)

        def _send_json(self, status, node):
            self._send(status, json.dumps(node).encode("utf-8"))

        def _send_error(self, status, code, message, violations=None):
            node = {"error": code, "message": message}
            if violations is not None:
                node["violations"] = [
                    {"code": v.code, "message": v.message, "path": v.path}
                    for v in violations]
            self._send_json(status, node)

        def do_OPTIONS(self):
            self._send(204, b"")

        def do_GET(self):
            parsed = urlparse(self.path)
            route = parsed.path
            if route == "/api/lightscape":
                revision, data = store.snapshot()
                body = (b'{"revision": %d, "document": %s}'
                        % (revision, data.rstrip(b"\n")))
                self._send(200, body)
            elif route == "/api/palette":
                self._send(200, serialize_palette(store.document.palette))
            elif route == "/api/analysis":
                if analysis_bytes is None:
                    self._send_error(404, "no-analysis", "no analysis document loaded")
                else:
                    self._send(200, analysis_bytes)
            elif route == "/api/audio":
                if audio_bytes is None:
                    self._send_error(404, "no-audio", "no audio loaded")
                else:
                    self._send(200, audio_bytes, content_type="audio/wav")
            elif route == "/api/frames":
                self._handle_frames(parsed)
            elif ui_root is not None:
                self._serve_static(route)
            else:
                self._send_error(404, "not-found", f"unknown path {route}")

        def _handle_frames(self, parsed):
            query = parse_qs(parsed.query)
            try:
                fps = float(query.get("fps", ["30"])[0])
                if fps <= 0 or fps > 240:
                    raise ValueError("fps out of range")
            except ValueError as exc:
                self._send_error(400, "bad-fps", str(exc))
                return
            doc = store.document
            raw = frames_to_raw(render_all(doc, venue, fps), fps)
            self._send(200, raw, content_type="application/octet-stream")

        def _serve_static(self, route):
            rel = route.lstrip("/") or "index.html"
            target = (ui_root / rel).resolve()
            if not str(target).startswith(str(ui_root)) or not target.is_file():
                self._send_error(404, "not-found", f"unknown path {route}")
                return
            kind = {
                ".html": "text/html", ".js": "text/javascript",
                ".css": "text/css", ".map": "application/json",
                ".svg": "image/svg+xml",
            }.get(target.suffix, "application/octet-stream")
            self._send(200, target.read_bytes(), content_type=kind)

        def do_PUT(self):
            if urlparse(self.path).path != "/api/lightscape":
                self._send_error(404, "not-found", f"unknown path {self.path}")
                return
            try:
                length = int(self.headers.get("Content-Length", "0"))
                node = json.loads(self.rfile.read(length))
                revision = int(node["revision"])
                document = node["document"]
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                self._send_error(400, "bad-request",
                                 f"body must be {{revision, document}}: {exc}")
                return
            try:
                new_revision = store.replace(revision, document)
            except StaleRevision as exc:
                self._send_error(409, exc.code, str(exc))
            except ValidationError as exc:
                self._send_error(422, exc.code, "document rejected",
                                 violations=exc.violations)
            except InputError as exc:
                self._send_error(422, exc.code, str(exc))
            else:
                self._send_json(200, {"revision": new_revision})

    server = ThreadingHTTPServer((host, port), Handler)
    server.store = store  # exposed for tests
    return server


def serve_forever(server: ThreadingHTTPServer):
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
