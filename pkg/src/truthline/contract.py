"""Wire-protocol conformance checks for scorer services.

Runs the same assertions against anything claiming to implement the
scorer protocol — the bundled stub server or a production service — so a
service swap never changes what "conformant" means. Keep these checks
transport-level: they talk plain HTTP and never import a scorer
implementation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import requests

__all__ = ["CheckResult", "run_protocol_checks", "assert_protocol"]

_TIMEOUT = 10.0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _check(name, condition, detail=""):
    return CheckResult(name=name, passed=bool(condition), detail="" if condition else detail)


def run_protocol_checks(base_url: str) -> list:
    """Exercise /healthz, /v1/score, /v1/score_batch, and malformed-body handling."""
    base = base_url.rstrip("/")
    results = []

    resp = requests.get(f"{base}/healthz", timeout=_TIMEOUT)
    results.append(_check("healthz_200", resp.status_code == 200, f"got HTTP {resp.status_code}"))

    resp = requests.post(
        f"{base}/v1/score",
        json={"premise": "the cat sat on the mat", "hypothesis": "the cat sat"},
        timeout=_TIMEOUT,
    )
    ok = 200 <= resp.status_code < 300
    results.append(_check("score_2xx", ok, f"got HTTP {resp.status_code}"))
    prob = None
    if ok:
        try:
            prob = resp.json().get("entail_prob")
        except ValueError:
            prob = None
    results.append(
        _check(
            "score_prob_in_range",
            isinstance(prob, (int, float)) and not isinstance(prob, bool) and 0.0 <= prob <= 1.0,
            f"entail_prob={prob!r}",
        )
    )

    items = [
        {"id": "c1", "premise": "stocks rose on tuesday", "hypothesis": "stocks rose"},
        {"id": "c2", "premise": "rain fell all day", "hypothesis": "markets rallied"},
        {"id": "c3", "premise": "the vote passed narrowly", "hypothesis": "the vote passed"},
    ]
    resp = requests.post(f"{base}/v1/score_batch", json={"items": items}, timeout=_TIMEOUT)
    ok = 200 <= resp.status_code < 300
    results.append(_check("batch_2xx", ok, f"got HTTP {resp.status_code}"))
    got = []
    if ok:
        try:
            got = resp.json().get("items", [])
        except ValueError:
            got = []
    results.append(
        _check(
            "batch_order_and_ids",
            [e.get("id") for e in got] == ["c1", "c2", "c3"],
            f"ids={[e.get('id') for e in got]}",
        )
    )
    results.append(
        _check(
            "batch_probs_in_range",
            len(got) == 3
            and all(
                isinstance(e.get("entail_prob"), (int, float))
                and not isinstance(e.get("entail_prob"), bool)
                and 0.0 <= e["entail_prob"] <= 1.0
                for e in got
            ),
            f"items={got!r}",
        )
    )

    resp = requests.post(
        f"{base}/v1/score",
        data="{",
        headers={"Content-Type": "application/json"},
        timeout=_TIMEOUT,
    )
    results.append(
        _check("malformed_body_400", resp.status_code == 400, f"got HTTP {resp.status_code}")
    )
    return results


def assert_protocol(base_url: str) -> None:
    """Raise AssertionError listing every failed conformance check."""
    failures = [r for r in run_protocol_checks(base_url) if not r.passed]
    if failures:
        lines = "; ".join(f"{r.name}: {r.detail}" for r in failures)
        raise AssertionError(f"scorer at {base_url} violates the wire protocol: {lines}")
