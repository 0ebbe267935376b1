"""Entailment scoring behind one interface.

Two backends produce the same thing, a probability in [0, 1] that a
source document entails a headline:

* a lexical baseline — logistic regression over overlap features,
  trained here, deterministic to the last bit; and
* a remote scorer — any service speaking the wire protocol in
  `truthline.remote` (the production path for neural classifiers, which
  this package deliberately never embeds).

`classify` turns a probability into {entail, non_entail} with an
inclusive threshold: prob >= threshold means entail.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, DegenerateInputError, ScorerError
from .metrics import lcs_length
from .textkit import StopwordList, TokenizerConfig, content_tokens, ngrams, tokenize

__all__ = [
    "FEATURE_NAMES",
    "EntailmentScore",
    "LexicalFeatures",
    "LexicalModel",
    "ScorerBinding",
    "LexicalScorer",
    "extract_features",
    "train_lexical",
    "evaluate_model",
    "save_model",
    "load_model",
    "build_scorer",
    "score",
    "classify",
]

log = logging.getLogger(__name__)

FEATURE_NAMES = (
    "unigram_recall",
    "content_recall",
    "bigram_recall",
    "novel_token_rate",
    "length_ratio",
    "lcs_ratio",
)

FAILURE_POLICIES = ("fail_run", "skip_and_log", "retry_then_fail")


@dataclass(frozen=True)
class EntailmentScore:
    entail_prob: float

    def __post_init__(self):
        if not 0.0 <= self.entail_prob <= 1.0:
            raise DataError(f"entail_prob out of [0, 1]: {self.entail_prob}")


@dataclass(frozen=True)
class LexicalFeatures:
    """Overlap features of a (source, headline) token pair.

    `source_empty` flags the degenerate empty-source case, where recalls
    are 0 and length_ratio is the +inf sentinel.
    """

    unigram_recall: float
    content_recall: float
    bigram_recall: float
    novel_token_rate: float
    length_ratio: float
    lcs_ratio: float
    source_empty: bool = False

    def as_vector(self) -> tuple:
        return (
            self.unigram_recall,
            self.content_recall,
            self.bigram_recall,
            self.novel_token_rate,
            self.length_ratio,
            self.lcs_ratio,
        )


def extract_features(
    source_tokens: Sequence[str],
    headline_tokens: Sequence[str],
    stopwords: StopwordList,
) -> LexicalFeatures:
    """Compute overlap features; clipped multiset matching throughout."""
    if not headline_tokens:
        raise DegenerateInputError("cannot extract features for an empty headline")
    head_uni = ngrams(headline_tokens, 1)
    src_uni = ngrams(source_tokens, 1)
    unigram_overlap = sum((head_uni & src_uni).values())
    unigram_recall = unigram_overlap / len(headline_tokens)

    head_content = content_tokens(headline_tokens, stopwords)
    if head_content:
        src_content = content_tokens(source_tokens, stopwords)
        content_overlap = sum((ngrams(head_content, 1) & ngrams(src_content, 1)).values())
        content_recall = content_overlap / len(head_content)
    else:
        content_recall = 0.0

    head_bi = ngrams(headline_tokens, 2)
    n_head_bi = sum(head_bi.values())
    if n_head_bi:
        bigram_overlap = sum((head_bi & ngrams(source_tokens, 2)).values())
        bigram_recall = bigram_overlap / n_head_bi
    else:
        bigram_recall = 0.0

    source_empty = not source_tokens
    length_ratio = math.inf if source_empty else len(headline_tokens) / len(source_tokens)
    lcs_ratio = lcs_length(source_tokens, headline_tokens) / len(headline_tokens)
    return LexicalFeatures(
        unigram_recall=unigram_recall,
        content_recall=content_recall,
        bigram_recall=bigram_recall,
        novel_token_rate=1.0 - unigram_recall,
        length_ratio=length_ratio,
        lcs_ratio=lcs_ratio,
        source_empty=source_empty,
    )


@dataclass(frozen=True)
class LexicalModel:
    """Trained logistic model plus the standardization frozen at training time."""

    weights: tuple
    bias: float
    feature_means: tuple
    feature_stds: tuple
    feature_names: tuple = FEATURE_NAMES
    training_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.feature_names)
        if not (len(self.weights) == len(self.feature_means) == len(self.feature_stds) == n):
            raise DataError("model vectors disagree with feature count")
        if any(s <= 0 for s in self.feature_stds):
            raise DataError("feature stds must be strictly positive")

    def predict_proba(self, features: LexicalFeatures) -> float:
        z = self.bias
        for w, x, m, s in zip(self.weights, features.as_vector(), self.feature_means, self.feature_stds):
            z += w * (x - m) / s
        if not math.isfinite(z):
            raise ScorerError("non-finite activation (degenerate features, e.g. empty source)")
        return _sigmoid(z)


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def _feature_matrix(
    labeled, stopwords: StopwordList, tokenizer: TokenizerConfig
) -> tuple:
    xs, ys = [], []
    for inst, label in labeled:
        if label not in ("entail", "non_entail"):
            raise DataError(f"instance {inst.id!r}: training label must be entail/non_entail, got {label!r}")
        feats = extract_features(
            tokenize(tokenizer, inst.source), tokenize(tokenizer, inst.headline), stopwords
        )
        xs.append(feats.as_vector())
        ys.append(1.0 if label == "entail" else 0.0)
    X = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    for j, name in enumerate(FEATURE_NAMES):
        if not np.all(np.isfinite(X[:, j])):
            raise DataError(f"non-finite values in feature {name!r} (check for empty sources)")
    return X, y


def train_lexical(
    labeled: Iterable,
    stopwords: StopwordList | None = None,
    *,
    tokenizer: TokenizerConfig | None = None,
    epochs: int = 200,
    learning_rate: float = 0.5,
    seed: int = 0,
    batch_size: int = 32,
) -> LexicalModel:
    """Train the lexical baseline by mini-batch gradient descent.

    Deterministic for a given seed (shuffling comes from a seeded
    generator). The per-epoch training loss is logged and recorded in
    training_meta["loss_curve"]; it is non-increasing up to a 1e-3
    per-epoch tolerance (mini-batch noise).
    """
    stopwords = stopwords if stopwords is not None else StopwordList()
    tokenizer = tokenizer or TokenizerConfig()
    labeled = list(labeled)
    classes = {label for _, label in labeled}
    if classes != {"entail", "non_entail"}:
        raise DataError(f"training data must contain both classes, got {sorted(classes)}")
    X, y = _feature_matrix(labeled, stopwords, tokenizer)
    n, d = X.shape

    means = X.mean(axis=0)
    stds = X.std(axis=0)
    # A (near-)constant feature gets unit scale; dividing by float noise
    # would make scoring explode on any value off the training constant.
    stds[stds <= 1e-12] = 1.0
    Xs = (X - means) / stds

    rng = np.random.default_rng(seed)
    w = np.zeros(d)
    b = 0.0
    losses = []
    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            xb, yb = Xs[idx], y[idx]
            z = xb @ w + b
            p = 1.0 / (1.0 + np.exp(-np.clip(z, -500, 500)))
            grad_w = xb.T @ (p - yb) / len(idx)
            grad_b = float(np.mean(p - yb))
            w -= learning_rate * grad_w
            b -= learning_rate * grad_b
        z_all = Xs @ w + b
        loss = float(np.mean(np.logaddexp(0.0, z_all) - y * z_all))
        if not math.isfinite(loss):
            raise DataError("training diverged to a non-finite loss; lower the learning rate")
        losses.append(loss)
        log.debug("epoch %d: loss %.6f", epoch + 1, loss)

    return LexicalModel(
        weights=tuple(float(v) for v in w),
        bias=float(b),
        feature_means=tuple(float(v) for v in means),
        feature_stds=tuple(float(v) for v in stds),
        training_meta={
            "epochs": epochs,
            "learning_rate": learning_rate,
            "seed": seed,
            "batch_size": batch_size,
            "n_train": n,
            "final_loss": losses[-1] if losses else None,
            "loss_curve": losses,
        },
    )


def evaluate_model(
    model: LexicalModel,
    labeled: Iterable,
    stopwords: StopwordList | None = None,
    *,
    tokenizer: TokenizerConfig | None = None,
    threshold: float = 0.5,
) -> dict:
    """Accuracy plus the full confusion matrix of a model on labeled pairs."""
    stopwords = stopwords if stopwords is not None else StopwordList()
    tokenizer = tokenizer or TokenizerConfig()
    scorer = LexicalScorer(model, stopwords=stopwords, tokenizer=tokenizer)
    tp = fp = tn = fn = 0
    for inst, label in labeled:
        pred = scorer.score_one(inst.source, inst.headline) >= threshold
        truth = label == "entail"
        if pred and truth:
            tp += 1
        elif pred and not truth:
            fp += 1
        elif not pred and not truth:
            tn += 1
        else:
            fn += 1
    total = tp + fp + tn + fn
    if total == 0:
        raise DataError("no labeled pairs to evaluate")
    return {
        "n": total,
        "accuracy": (tp + tn) / total,
        "confusion": {"tp": tp, "fp": fp, "tn": tn, "fn": fn},
    }


def save_model(model: LexicalModel, path) -> None:
    """Write the model artifact: JSON with weights, standardization, and training meta."""
    payload = {
        "weights": list(model.weights),
        "bias": model.bias,
        "feature_means": list(model.feature_means),
        "feature_stds": list(model.feature_stds),
        "feature_names": list(model.feature_names),
        "training_meta": model.training_meta,
    }
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def load_model(path) -> LexicalModel:
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return LexicalModel(
            weights=tuple(payload["weights"]),
            bias=float(payload["bias"]),
            feature_means=tuple(payload["feature_means"]),
            feature_stds=tuple(payload["feature_stds"]),
            feature_names=tuple(payload["feature_names"]),
            training_meta=dict(payload.get("training_meta", {})),
        )
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: not a valid lexical model artifact: {exc}") from exc


class LexicalScorer:
    """Pure in-process scorer over a trained LexicalModel; parallel-safe."""

    def __init__(
        self,
        model: LexicalModel,
        *,
        stopwords: StopwordList | None = None,
        tokenizer: TokenizerConfig | None = None,
    ):
        self.model = model
        self.stopwords = stopwords if stopwords is not None else StopwordList()
        self.tokenizer = tokenizer or TokenizerConfig()

    def score_one(self, premise: str, hypothesis: str) -> float:
        feats = extract_features(
            tokenize(self.tokenizer, premise),
            tokenize(self.tokenizer, hypothesis),
            self.stopwords,
        )
        return self.model.predict_proba(feats)

    def score_many(self, items: Sequence) -> list:
        """items: (id, premise, hypothesis) triples; returns probabilities in order."""
        return [self.score_one(premise, hypothesis) for _, premise, hypothesis in items]


@dataclass
class ScorerBinding:
    """Configuration of one scorer backend.

    Exactly one backing: kind="lexical" requires `model` (or `model_path`),
    kind="remote" requires `endpoint`.
    """

    kind: str
    model: LexicalModel | None = None
    model_path: str | None = None
    endpoint: str | None = None
    timeout: float = 30.0
    max_in_flight: int = 4
    threshold: float = 0.5
    retries: int = 3
    on_failure: str = "retry_then_fail"
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    stopwords: StopwordList = field(default_factory=StopwordList)

    def __post_init__(self):
        if self.kind not in ("lexical", "remote"):
            raise DataError(f"unknown scorer kind {self.kind!r}")
        if not 0.0 < self.threshold < 1.0:
            raise DataError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.on_failure not in FAILURE_POLICIES:
            raise DataError(f"unknown failure policy {self.on_failure!r}")
        has_lexical = self.model is not None or self.model_path is not None
        has_remote = self.endpoint is not None
        if self.kind == "lexical" and (not has_lexical or has_remote):
            raise DataError("lexical binding requires a model and no endpoint")
        if self.kind == "remote" and (not has_remote or has_lexical):
            raise DataError("remote binding requires an endpoint and no model")
        if self.max_in_flight < 1:
            raise DataError("max_in_flight must be >= 1")


def build_scorer(binding: ScorerBinding):
    """Instantiate the scorer a binding describes."""
    if binding.kind == "lexical":
        model = binding.model if binding.model is not None else load_model(binding.model_path)
        return LexicalScorer(model, stopwords=binding.stopwords, tokenizer=binding.tokenizer)
    from .remote import RemoteScorer

    retries = binding.retries if binding.on_failure == "retry_then_fail" else 0
    return RemoteScorer(
        binding.endpoint,
        timeout=binding.timeout,
        max_in_flight=binding.max_in_flight,
        retries=retries,
    )


def score(binding: ScorerBinding, source: str, headline: str) -> EntailmentScore:
    """Probability that `source` entails `headline` under the bound backend."""
    scorer = binding if hasattr(binding, "score_one") else build_scorer(binding)
    return EntailmentScore(entail_prob=scorer.score_one(source, headline))


def classify(binding: ScorerBinding, source: str, headline: str) -> str:
    """Binary decision: entail iff probability >= threshold (inclusive)."""
    threshold = getattr(binding, "threshold", 0.5)
    return "entail" if score(binding, source, headline).entail_prob >= threshold else "non_entail"
