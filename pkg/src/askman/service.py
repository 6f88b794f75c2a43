"""HTTP JSON service over a built clause store.

Endpoints: ``POST /query`` with body ``{"question": text, "mode":
"internal"|"external"}`` answers a question; ``GET /health`` reports
readiness and document count; every other GET serves the static UI bundle.
The store is read-only, so requests are handled concurrently without
locking; both storage modes are available per request.
"""

from __future__ import annotations

import json
import mimetypes
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from pathlib import Path

from .engine import AnswerEngine
from .logform import UnparseableQuery
from .store import EXTERNAL, INTERNAL, CorpusStore, StoreCorrupt


def default_ui_dir() -> str:
    return str(resources.files("askman") / "data" / "ui")


class _Handler(BaseHTTPRequestHandler):
    engine: AnswerEngine
    ui_root: Path

    # -- plumbing -----------------------------------------------------------

    def log_message(self, format, *args):  # noqa: A002 - base class signature
        pass  # tests and the benchmark need quiet stderr

    def _send_json(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    # -- routes -------------------------------------------------------------

    def do_GET(self) -> None:
        path = self.path.split("?", 1)[0]
        if path == "/health":
            self._send_json(200, {"status": "ok", "docs": self.engine.doc_count()})
            return
        self._send_static(path)

    def do_POST(self) -> None:
        if self.path.split("?", 1)[0] != "/query":
            self._send_json(404, {"error": "not_found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length) or b"{}")
            question = body.get("question")
            mode = body.get("mode", EXTERNAL)
        except (ValueError, AttributeError):
            self._send_json(400, {"error": "bad_request"})
            return
        if not isinstance(question, str) or mode not in (INTERNAL, EXTERNAL):
            self._send_json(400, {"error": "bad_request"})
            return
        started = time.perf_counter()
        try:
            answers = self.engine.answer(question, mode=mode)
        except UnparseableQuery:
            self._send_json(400, {"error": "unparseable_query"})
            return
        except StoreCorrupt as err:
            self._send_json(500, {"error": "store_corrupt", "detail": str(err)})
            return
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        self._send_json(
            200,
            {
                "answers": [
                    {
                        "doc": ans.doc_id,
                        "sent": ans.sent_id,
                        "text": ans.sentence_text,
                        "spans": [[start, end] for start, end in ans.spans],
                        "score": ans.score,
                    }
                    for ans in answers
                ],
                "elapsedMs": elapsed_ms,
            },
        )

    # -- static files -------------------------------------------------------

    def _send_static(self, path: str) -> None:
        name = path.lstrip("/") or "index.html"
        target = (self.ui_root / name).resolve()
        if not str(target).startswith(str(self.ui_root.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not_found"})
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    store_root: str,
    host: str = "127.0.0.1",
    port: int = 8765,
    ui_dir: str | None = None,
) -> ThreadingHTTPServer:
    """Build a ready-to-run server; the store is preloaded up front."""
    store = CorpusStore.open(store_root)
    store.preload_all()
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"engine": AnswerEngine(store), "ui_root": Path(ui_dir or default_ui_dir())},
    )
    return ThreadingHTTPServer((host, port), handler)


def serve(store_root: str, host: str = "127.0.0.1", port: int = 8765, ui_dir: str | None = None) -> None:
    server = make_server(store_root, host=host, port=port, ui_dir=ui_dir)
    host_shown, port_bound = server.server_address[:2]
    print(f"serving on http://{host_shown}:{port_bound}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
