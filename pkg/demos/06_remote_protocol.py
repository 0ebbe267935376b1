# Talking to an entailment scorer over the wire protocol. The bundled
# stub server implements the same protocol as a production scorer, so the
# client and the conformance checks are identical for both.
# Run: python demos/06_remote_protocol.py

from truthline import RemoteScorer, ScorerBinding, classify
from truthline.contract import run_protocol_checks
from truthline.testing import StubScorerServer

# A scripted stub: ids listed here get fixed probabilities.
decisions = {"a": 0.93, "b": 0.12, "c": 0.55}

with StubScorerServer(decisions=decisions, default=0.5, latency=0.01) as stub:
    print("scorer listening at", stub.base_url)

    # Conformance first: /healthz, /v1/score, /v1/score_batch, and
    # malformed-body handling.
    for check in run_protocol_checks(stub.base_url):
        print(f"  {'ok ' if check.passed else 'FAIL'} {check.name} {check.detail}")

    # One-off scoring and a threshold decision through a binding.
    binding = ScorerBinding(kind="remote", endpoint=stub.base_url, threshold=0.5)
    print("\nsingle pair ->", classify(binding, "the cat sat on the mat", "the cat sat"))

    # Batch scoring: chunks run concurrently, but never more than
    # max_in_flight requests are outstanding, and results come back in
    # input order regardless of completion order.
    scorer = RemoteScorer(stub.base_url, batch_size=1, max_in_flight=2)
    probs = scorer.score_many([(i, "premise text", "hypothesis") for i in ("a", "b", "c")])
    print("batch probabilities:", probs)
    print("max in flight seen by the server:", stub.max_in_flight_seen, "(cap was 2)")
