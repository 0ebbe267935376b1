"""Binary fine-tuning of a pretrained classifier on entailment-labeled pairs.

Consumes the toolkit's interchange files directly: instances.jsonl for the
texts and aggregated.jsonl for the labels (undecided panels are skipped).
A zero-epoch run saves the base model untouched, so the checkpoint is a
pass-through. Otherwise the head is re-initialized for two classes
(non_entail=0, entail=1) and trained with AdamW; the report carries
holdout accuracy and the confusion matrix.
"""

from __future__ import annotations

import json
import logging
import random
from pathlib import Path

import torch
from transformers import AutoModelForSequenceClassification, AutoTokenizer

log = logging.getLogger(__name__)

ID2LABEL = {0: "non_entail", 1: "entail"}


def _read_jsonl(path) -> list:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def load_labeled_pairs(instances_path, labels_path) -> list:
    """Join instances.jsonl with aggregated.jsonl into (premise, hypothesis, y)."""
    instances = {row["id"]: row for row in _read_jsonl(instances_path)}
    pairs = []
    for row in _read_jsonl(labels_path):
        label = row["label"]
        if label == "undecided":
            continue
        if label not in ("entail", "non_entail"):
            raise ValueError(f"unexpected aggregated label {label!r}")
        inst = instances.get(row["instance_id"])
        if inst is None:
            raise ValueError(f"label references unknown instance {row['instance_id']!r}")
        pairs.append((inst["source"], inst["headline"], 1 if label == "entail" else 0))
    if not pairs:
        raise ValueError("no usable labeled pairs")
    return pairs


def finetune(
    base_model: str,
    instances_path,
    labels_path,
    out_dir,
    *,
    epochs: int = 10,
    learning_rate: float = 2e-5,
    batch_size: int = 8,
    seed: int = 0,
    holdout: float = 0.2,
    max_seq_len: int = 256,
    device: str = "cpu",
) -> dict:
    out_dir = Path(out_dir)
    tokenizer = AutoTokenizer.from_pretrained(base_model)

    if epochs == 0:
        model = AutoModelForSequenceClassification.from_pretrained(base_model)
        model.save_pretrained(out_dir)
        tokenizer.save_pretrained(out_dir)
        report = {"epochs": 0, "note": "pass-through checkpoint, base model unchanged"}
        (out_dir / "finetune_report.json").write_text(json.dumps(report, indent=2) + "\n")
        return report

    pairs = load_labeled_pairs(instances_path, labels_path)
    classes = {y for _, _, y in pairs}
    if classes != {0, 1}:
        raise ValueError("fine-tuning needs both entail and non_entail pairs")

    rng = random.Random(seed)
    order = list(range(len(pairs)))
    rng.shuffle(order)
    n_hold = int(len(pairs) * holdout)
    hold = [pairs[i] for i in order[:n_hold]]
    train = [pairs[i] for i in order[n_hold:]]

    torch.manual_seed(seed)
    model = AutoModelForSequenceClassification.from_pretrained(
        base_model,
        num_labels=2,
        id2label=ID2LABEL,
        label2id={v: k for k, v in ID2LABEL.items()},
        ignore_mismatched_sizes=True,
    )
    model.to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=learning_rate)

    def encode(batch):
        enc = tokenizer(
            [p for p, _, _ in batch],
            [h for _, h, _ in batch],
            truncation="only_first",
            max_length=max_seq_len,
            padding=True,
            return_tensors="pt",
        ).to(device)
        return enc, torch.tensor([y for _, _, y in batch], device=device)

    model.train()
    losses = []
    for epoch in range(epochs):
        rng.shuffle(train)
        epoch_loss = 0.0
        for start in range(0, len(train), batch_size):
            batch = train[start : start + batch_size]
            enc, labels = encode(batch)
            out = model(**enc, labels=labels)
            out.loss.backward()
            optimizer.step()
            optimizer.zero_grad()
            epoch_loss += float(out.loss.detach()) * len(batch)
        losses.append(epoch_loss / len(train))
        log.info("epoch %d/%d: loss %.4f", epoch + 1, epochs, losses[-1])

    model.eval()

    def evaluate(split):
        if not split:
            return None
        tp = fp = tn = fn = 0
        with torch.no_grad():
            for start in range(0, len(split), batch_size):
                batch = split[start : start + batch_size]
                enc, labels = encode(batch)
                preds = model(**enc).logits.argmax(dim=-1)
                for pred, truth in zip(preds.tolist(), labels.tolist()):
                    if pred and truth:
                        tp += 1
                    elif pred and not truth:
                        fp += 1
                    elif not pred and not truth:
                        tn += 1
                    else:
                        fn += 1
        total = tp + fp + tn + fn
        return {"n": total, "accuracy": (tp + tn) / total, "confusion": {"tp": tp, "fp": fp, "tn": tn, "fn": fn}}

    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    report = {
        "epochs": epochs,
        "learning_rate": learning_rate,
        "seed": seed,
        "n_train": len(train),
        "n_holdout": len(hold),
        "loss_curve": [round(l, 6) for l in losses],
        "train_eval": evaluate(train),
        "holdout_eval": evaluate(hold),
    }
    (out_dir / "finetune_report.json").write_text(json.dumps(report, indent=2) + "\n")
    return report
