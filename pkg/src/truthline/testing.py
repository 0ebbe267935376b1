"""Test doubles for scorer integrations.

`ScriptedScorer` is an in-process scorer driven by an explicit decision
list. `StubScorerServer` is a real HTTP server speaking the scorer wire
protocol, instrumented to report the maximum number of requests it ever
held in flight — the cheap way to verify client-side concurrency bounds
and to run pipelines end to end without a model anywhere near the tests.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

__all__ = ["ScriptedScorer", "StubScorerServer"]


class ScriptedScorer:
    """Scorer returning scripted probabilities by instance id.

    `decisions` maps id -> probability; ids not in the script get
    `default`. `score_one` has no id, so it always returns `default`.
    """

    def __init__(self, decisions=None, default: float = 0.5):
        self.decisions = dict(decisions or {})
        self.default = float(default)
        self.calls = 0

    def score_one(self, premise: str, hypothesis: str) -> float:
        self.calls += 1
        return self.default

    def score_many(self, items) -> list:
        out = []
        for item_id, _premise, _hypothesis in items:
            self.calls += 1
            out.append(float(self.decisions.get(item_id, self.default)))
        return out


class _StubHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def _read_body(self):
        length = int(self.headers.get("Content-Length", 0))
        return self.rfile.read(length).decode("utf-8")

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/healthz":
            self._send_json(200, {"status": "ok"})
        else:
            self._send_json(404, {"error": "not found"})

    def do_POST(self):
        server = self.server
        with server.state_lock:
            server.in_flight += 1
            server.max_in_flight_seen = max(server.max_in_flight_seen, server.in_flight)
            server.request_count += 1
        try:
            if server.latency:
                time.sleep(server.latency)
            try:
                payload = json.loads(self._read_body())
            except json.JSONDecodeError:
                self._send_json(400, {"error": "malformed JSON body"})
                return
            if self.path == "/v1/score":
                if not isinstance(payload, dict) or "premise" not in payload or "hypothesis" not in payload:
                    self._send_json(400, {"error": "expected premise and hypothesis"})
                    return
                prob = server.score_fn(None, payload["premise"], payload["hypothesis"])
                self._send_json(200, server.mangle_response({"entail_prob": prob}))
            elif self.path == "/v1/score_batch":
                items = payload.get("items") if isinstance(payload, dict) else None
                if not isinstance(items, list):
                    self._send_json(400, {"error": "expected items list"})
                    return
                out = [
                    {
                        "id": item.get("id"),
                        "entail_prob": server.score_fn(
                            item.get("id"), item.get("premise", ""), item.get("hypothesis", "")
                        ),
                    }
                    for item in items
                ]
                self._send_json(200, server.mangle_response({"items": out}))
            else:
                self._send_json(404, {"error": "not found"})
        finally:
            with server.state_lock:
                server.in_flight -= 1


class _StubServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True


class StubScorerServer:
    """Instrumented scorer-protocol HTTP server for tests and local runs.

    score_fn(instance_id_or_None, premise, hypothesis) -> probability.
    `decisions` is a shorthand for an id-keyed script (falling back to
    `default`). `latency` (seconds) makes concurrency observable;
    `mangle_response` lets a test inject protocol violations.

    Usable as a context manager; `base_url` is the address to bind to a
    remote scorer.
    """

    def __init__(
        self,
        score_fn=None,
        *,
        decisions=None,
        default: float = 0.5,
        latency: float = 0.0,
        mangle_response=None,
        port: int = 0,
    ):
        if score_fn is None:
            script = dict(decisions or {})

            def score_fn(item_id, premise, hypothesis, _script=script, _default=default):
                return float(_script.get(item_id, _default))

        self._server = _StubServer(("127.0.0.1", port), _StubHandler)
        self._server.score_fn = score_fn
        self._server.latency = latency
        self._server.mangle_response = mangle_response or (lambda payload: payload)
        self._server.state_lock = threading.Lock()
        self._server.in_flight = 0
        self._server.max_in_flight_seen = 0
        self._server.request_count = 0
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    @property
    def max_in_flight_seen(self) -> int:
        with self._server.state_lock:
            return self._server.max_in_flight_seen

    @property
    def request_count(self) -> int:
        with self._server.state_lock:
            return self._server.request_count

    def start(self) -> "StubScorerServer":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "StubScorerServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()
