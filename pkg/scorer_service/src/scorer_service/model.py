"""Sequence-classification model wrapper.

Scores (premise, hypothesis) pairs with any Hugging Face sequence
classifier. The entailment probability is the softmax mass of the
entailment class over the model's full label set. Truncation always eats
the premise tail first: the hypothesis is short and is exactly what the
entailment judgment is about, so it stays intact.
"""

from __future__ import annotations

import logging

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

from .config import ServiceConfig

log = logging.getLogger(__name__)

# number of special tokens in a CLS ... SEP ... SEP pair encoding, plus one
# premise token that must survive truncation
_PAIR_OVERHEAD = 4


class OversizeItemError(ValueError):
    """A single item cannot fit the model's sequence budget."""


def _resolve_entail_index(id2label: dict, spec: str) -> int:
    if spec != "auto":
        if spec.isdigit():
            return int(spec)
        for idx, label in id2label.items():
            if label.lower() == spec.lower():
                return int(idx)
        raise ValueError(f"label {spec!r} not in model labels {id2label}")
    candidates = [
        int(idx)
        for idx, label in id2label.items()
        if "entail" in label.lower() and not any(neg in label.lower() for neg in ("non", "not"))
    ]
    if len(candidates) == 1:
        return candidates[0]
    if len(id2label) == 2:
        log.warning("no explicit entailment label in %s; assuming index 1", id2label)
        return 1
    raise ValueError(f"cannot infer the entailment class from labels {id2label}")


class EntailmentModel:
    def __init__(self, config: ServiceConfig):
        self.config = config
        log.info("loading model %s on %s", config.model, config.device)
        self.tokenizer = AutoTokenizer.from_pretrained(config.model)
        self.model = AutoModelForSequenceClassification.from_pretrained(config.model)
        self.model.to(config.device)
        self.model.eval()
        self.entail_index = _resolve_entail_index(
            {int(k): v for k, v in self.model.config.id2label.items()}, config.entail_label
        )
        log.info("entailment class: index %d (%s)", self.entail_index,
                 self.model.config.id2label[self.entail_index])

    def check_item(self, premise: str, hypothesis: str) -> None:
        """Raise OversizeItemError when an item cannot be scored faithfully."""
        if len(premise) + len(hypothesis) > self.config.max_item_chars:
            raise OversizeItemError(
                f"item exceeds {self.config.max_item_chars} characters"
            )
        hyp_len = len(self.tokenizer(hypothesis, add_special_tokens=False)["input_ids"])
        if hyp_len + _PAIR_OVERHEAD > self.config.max_seq_len:
            raise OversizeItemError(
                f"hypothesis occupies {hyp_len} tokens; premise-first truncation "
                f"cannot fit it into {self.config.max_seq_len}"
            )

    def score_batch(self, pairs) -> list:
        """Probabilities for (premise, hypothesis) pairs, split into
        max_batch_size chunks internally; output order matches input."""
        probs: list[float] = []
        size = self.config.max_batch_size
        for start in range(0, len(pairs), size):
            chunk = pairs[start : start + size]
            encoded = self.tokenizer(
                [p for p, _ in chunk],
                [h for _, h in chunk],
                truncation="only_first",
                max_length=self.config.max_seq_len,
                padding=True,
                return_tensors="pt",
            ).to(self.config.device)
            with torch.no_grad():
                logits = self.model(**encoded).logits
            chunk_probs = torch.softmax(logits, dim=-1)[:, self.entail_index]
            probs.extend(float(p) for p in chunk_probs.cpu())
        return probs

    def score_one(self, premise: str, hypothesis: str) -> float:
        return self.score_batch([(premise, hypothesis)])[0]
