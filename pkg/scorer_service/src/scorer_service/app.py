"""HTTP surface: the truthline scorer wire protocol.

POST /v1/score        {"premise","hypothesis"} -> {"entail_prob"}
POST /v1/score_batch  {"items":[{"id","premise","hypothesis"}]}
                      -> {"items":[{"id","entail_prob"}]}, order preserved
GET  /healthz         -> 200 when ready

Malformed JSON or missing fields -> 400 with an error body; an item the
model cannot fit -> 413; model failure -> 500. One JSON log line per
request records path, status, latency, and batch size.
"""

from __future__ import annotations

import json
import logging
import time

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .model import EntailmentModel, OversizeItemError

log = logging.getLogger("scorer_service")


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


async def _parse_body(request: Request):
    raw = await request.body()
    try:
        return json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"malformed JSON body: {exc}") from exc


def _require_text(obj: dict, key: str) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise ValueError(f"field {key!r} must be a string")
    return value


def create_app(model: EntailmentModel) -> FastAPI:
    app = FastAPI(title="scorer-service", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def request_log(request: Request, call_next):
        start = time.perf_counter()
        response = await call_next(request)
        log.info(
            "%s",
            json.dumps(
                {
                    "path": request.url.path,
                    "status": response.status_code,
                    "latency_ms": round((time.perf_counter() - start) * 1000, 2),
                    "batch_size": getattr(request.state, "batch_size", None),
                },
                sort_keys=True,
            ),
        )
        return response

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.post("/v1/score")
    async def score(request: Request):
        request.state.batch_size = 1
        try:
            body = await _parse_body(request)
            if not isinstance(body, dict):
                raise ValueError("body must be a JSON object")
            premise = _require_text(body, "premise")
            hypothesis = _require_text(body, "hypothesis")
        except ValueError as exc:
            return _error(400, str(exc))
        try:
            model.check_item(premise, hypothesis)
        except OversizeItemError as exc:
            return _error(413, str(exc))
        try:
            prob = model.score_one(premise, hypothesis)
        except Exception as exc:  # model failure must not kill the server
            log.exception("scoring failed")
            return _error(500, f"scoring failed: {exc}")
        return {"entail_prob": prob}

    @app.post("/v1/score_batch")
    async def score_batch(request: Request):
        try:
            body = await _parse_body(request)
            items = body.get("items") if isinstance(body, dict) else None
            if not isinstance(items, list):
                raise ValueError("body must be a JSON object with an items list")
            parsed = []
            for pos, item in enumerate(items):
                if not isinstance(item, dict) or "id" not in item:
                    raise ValueError(f"item {pos} must be an object with an id")
                parsed.append(
                    (item["id"], _require_text(item, "premise"), _require_text(item, "hypothesis"))
                )
        except ValueError as exc:
            return _error(400, str(exc))
        request.state.batch_size = len(parsed)
        try:
            for _, premise, hypothesis in parsed:
                model.check_item(premise, hypothesis)
        except OversizeItemError as exc:
            return _error(413, str(exc))
        try:
            probs = model.score_batch([(p, h) for _, p, h in parsed])
        except Exception as exc:
            log.exception("scoring failed")
            return _error(500, f"scoring failed: {exc}")
        return {
            "items": [
                {"id": item_id, "entail_prob": prob}
                for (item_id, _, _), prob in zip(parsed, probs)
            ]
        }

    return app
