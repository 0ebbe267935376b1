"""HTTP client for remote entailment scorers.

Wire protocol (UTF-8 JSON bodies):

* ``POST /v1/score``        {"premise": str, "hypothesis": str}
                            -> {"entail_prob": number in [0, 1]}
* ``POST /v1/score_batch``  {"items": [{"id", "premise", "hypothesis"}]}
                            -> {"items": [{"id", "entail_prob"}]}, order-preserving
* ``GET  /healthz``         -> 200 when ready

A non-2xx status, unparsable body, or out-of-range probability is a
protocol violation. Batch results are re-associated by id, so the server's
completion order never affects output order. At most `max_in_flight`
requests are outstanding at any moment.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor

import requests

from .errors import ProtocolViolationError, RemoteScorerError

__all__ = ["RemoteScorer"]

log = logging.getLogger(__name__)


def _parse_prob(value, *, instance_id=None) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ProtocolViolationError(
            f"entail_prob is not a number: {value!r}", instance_id=instance_id
        )
    prob = float(value)
    if not 0.0 <= prob <= 1.0:
        raise ProtocolViolationError(
            f"entail_prob out of [0, 1]: {prob}", instance_id=instance_id
        )
    return prob


class RemoteScorer:
    """Client for any service speaking the scorer wire protocol."""

    def __init__(
        self,
        endpoint: str,
        *,
        timeout: float = 30.0,
        max_in_flight: int = 4,
        retries: int = 3,
        batch_size: int = 32,
        backoff: float = 0.2,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.max_in_flight = max(1, int(max_in_flight))
        self.retries = max(0, int(retries))
        self.batch_size = max(1, int(batch_size))
        self.backoff = backoff

    # -- transport -----------------------------------------------------

    def _post(self, path: str, payload: dict, *, instance_id=None) -> dict:
        url = f"{self.endpoint}{path}"
        try:
            resp = requests.post(url, json=payload, timeout=self.timeout)
        except requests.RequestException as exc:
            raise RemoteScorerError(f"scorer unreachable at {url}: {exc}", instance_id=instance_id) from exc
        if not 200 <= resp.status_code < 300:
            raise ProtocolViolationError(
                f"{url} returned HTTP {resp.status_code}", instance_id=instance_id
            )
        try:
            body = resp.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise ProtocolViolationError(f"{url} returned unparsable JSON", instance_id=instance_id) from exc
        if not isinstance(body, dict):
            raise ProtocolViolationError(f"{url} returned a non-object body", instance_id=instance_id)
        return body

    def _with_retries(self, fn, *, what: str):
        attempt = 0
        while True:
            try:
                return fn()
            except RemoteScorerError as exc:
                if attempt >= self.retries or not exc.retryable:
                    raise
                attempt += 1
                log.warning("%s failed (%s); retry %d/%d", what, exc, attempt, self.retries)
                if self.backoff:
                    time.sleep(self.backoff * attempt)

    # -- protocol ------------------------------------------------------

    def health(self) -> bool:
        try:
            resp = requests.get(f"{self.endpoint}/healthz", timeout=self.timeout)
        except requests.RequestException:
            return False
        return resp.status_code == 200

    def score_one(self, premise: str, hypothesis: str) -> float:
        def call():
            body = self._post("/v1/score", {"premise": premise, "hypothesis": hypothesis})
            if "entail_prob" not in body:
                raise ProtocolViolationError("response lacks entail_prob")
            return _parse_prob(body["entail_prob"])

        return self._with_retries(call, what="score")

    def _score_chunk(self, chunk) -> dict:
        ids = [item_id for item_id, _, _ in chunk]

        def call():
            body = self._post(
                "/v1/score_batch",
                {"items": [{"id": i, "premise": p, "hypothesis": h} for i, p, h in chunk]},
                instance_id=ids[0],
            )
            items = body.get("items")
            if not isinstance(items, list) or len(items) != len(chunk):
                raise ProtocolViolationError(
                    f"batch response has {len(items) if isinstance(items, list) else 'no'} items, "
                    f"expected {len(chunk)}",
                    instance_id=ids[0],
                )
            probs = {}
            for entry in items:
                if not isinstance(entry, dict) or "id" not in entry or "entail_prob" not in entry:
                    raise ProtocolViolationError("malformed batch response item", instance_id=ids[0])
                probs[entry["id"]] = _parse_prob(entry["entail_prob"], instance_id=entry["id"])
            missing = [i for i in ids if i not in probs]
            if missing or len(probs) != len(chunk):
                raise ProtocolViolationError(
                    f"batch response ids do not match request (missing {missing[:3]})",
                    instance_id=missing[0] if missing else ids[0],
                )
            return probs

        return self._with_retries(call, what=f"score_batch[{ids[0]}..]")

    def score_many(self, items) -> list:
        """Score (id, premise, hypothesis) triples; probabilities return in input order.

        Chunks of `batch_size` go through /v1/score_batch with at most
        `max_in_flight` requests outstanding.
        """
        items = list(items)
        if not items:
            return []
        chunks = [items[i : i + self.batch_size] for i in range(0, len(items), self.batch_size)]
        by_id: dict = {}
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            for probs in pool.map(self._score_chunk, chunks):
                by_id.update(probs)
        return [by_id[item_id] for item_id, _, _ in items]
