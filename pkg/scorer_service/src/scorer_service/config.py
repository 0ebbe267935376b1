"""Service configuration, loadable from a JSON file or CLI flags."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class ServiceConfig:
    """Runtime configuration of the scoring service.

    `model` is a checkpoint directory or hub identifier. `entail_label`
    names the model's entailment class ("auto" scans id2label for it).
    Requests above `max_batch_size` are split internally; single items
    whose hypothesis alone cannot fit `max_seq_len` (or whose raw texts
    exceed `max_item_chars`) are rejected as oversize.
    """

    model: str
    device: str = "cpu"
    max_batch_size: int = 16
    max_seq_len: int = 256
    port: int = 8400
    host: str = "127.0.0.1"
    entail_label: str = "auto"
    max_item_chars: int = 100_000

    def __post_init__(self):
        if self.max_batch_size < 1:
            raise ValueError("max_batch_size must be >= 1")
        if self.max_seq_len < 8:
            raise ValueError("max_seq_len must be >= 8")

    @classmethod
    def from_file(cls, path) -> "ServiceConfig":
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        return cls(**payload)
