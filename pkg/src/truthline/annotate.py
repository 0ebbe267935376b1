"""Terminal annotation sessions and inter-annotator agreement.

A session walks an annotator through instances one at a time (source
first, then headline) and appends each judgment to a crash-safe,
append-only JSONL log. The first log line is a header object recording
the annotator, a dataset hash, the shuffle seed, and the guideline
version; re-opening the same log resumes exactly where the annotator
stopped and never re-presents a labeled instance.
"""

from __future__ import annotations

import hashlib
import json
import random
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .corpus import AnnotationRecord, Instance
from .errors import DataError

__all__ = [
    "GUIDELINE_VERSION",
    "load_guideline",
    "dataset_hash",
    "run_session",
    "agreement",
    "AgreementReport",
]

GUIDELINE_VERSION = "1.0"

_COMMANDS = {
    "e": "entail",
    "n": "non_entail",
    "i": "incomprehensible",
}


def load_guideline() -> str:
    """The labeling guideline displayed at the start of every session."""
    return resources.files("truthline").joinpath("data/guideline.txt").read_text(encoding="utf-8")


def dataset_hash(dataset: Sequence[Instance]) -> str:
    """Stable fingerprint of the instances an annotation log belongs to."""
    h = hashlib.sha256()
    for inst in dataset:
        h.update(inst.id.encode("utf-8"))
        h.update(b"\x00")
        h.update(inst.source.encode("utf-8"))
        h.update(b"\x00")
        h.update(inst.headline.encode("utf-8"))
        h.update(b"\x01")
    return h.hexdigest()[:16]


def _read_log(path):
    """Returns (header or None, records) from an existing session log."""
    header = None
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: corrupt session log at line {lineno}: {exc.msg}") from exc
            if "header" in obj:
                header = obj["header"]
            else:
                records.append(
                    AnnotationRecord(
                        instance_id=str(obj["instance_id"]),
                        annotator_id=str(obj["annotator_id"]),
                        label=str(obj["label"]),
                    )
                )
    return header, records


def run_session(
    dataset: Sequence[Instance],
    annotator_id: str,
    path,
    *,
    shuffle_seed: int | None = None,
    input_fn=input,
    out=None,
) -> list:
    """Run (or resume) an interactive labeling session; returns new records.

    Commands: e / n / i label the pair, s skips it for a later session,
    q saves and quits. Each judgment is appended and flushed immediately.
    """
    out = out if out is not None else sys.stdout
    if not dataset:
        raise DataError("cannot annotate an empty dataset")
    current_hash = dataset_hash(dataset)

    header = None
    done_ids: set = set()
    try:
        header, prior = _read_log(path)
        done_ids = {rec.instance_id for rec in prior if rec.annotator_id == annotator_id}
    except FileNotFoundError:
        pass
    if header is not None:
        if header.get("dataset_hash") != current_hash:
            raise DataError(
                f"{path}: session log belongs to a different dataset "
                f"(hash {header.get('dataset_hash')} != {current_hash})"
            )
        if header.get("annotator_id") != annotator_id:
            raise DataError(
                f"{path}: session log belongs to annotator {header.get('annotator_id')!r}"
            )
        shuffle_seed = header.get("shuffle_seed")

    # Fail on an unwritable path before the first prompt.
    try:
        log = open(path, "a", encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot open session log {path}: {exc}") from exc

    with log:
        if header is None:
            log.write(
                json.dumps(
                    {
                        "header": {
                            "annotator_id": annotator_id,
                            "dataset_hash": current_hash,
                            "shuffle_seed": shuffle_seed,
                            "guideline_version": GUIDELINE_VERSION,
                        }
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            log.flush()

        order = list(range(len(dataset)))
        if shuffle_seed is not None:
            random.Random(shuffle_seed).shuffle(order)

        print(load_guideline(), file=out)
        queue = [dataset[i] for i in order if dataset[i].id not in done_ids]
        print(f"{len(queue)} of {len(dataset)} instances to label.\n", file=out)

        new_records = []
        for inst in queue:
            print("-" * 60, file=out)
            print(f"[{inst.id}]", file=out)
            print(f"SOURCE   : {inst.source}", file=out)
            print(f"HEADLINE : {inst.headline}", file=out)
            while True:
                try:
                    cmd = input_fn("label [e/n/i/s/q]> ").strip().lower()
                except EOFError:
                    cmd = "q"
                if cmd in _COMMANDS or cmd in ("s", "q"):
                    break
                print("unknown command; use e, n, i, s, or q", file=out)
            if cmd == "q":
                break
            if cmd == "s":
                continue
            rec = AnnotationRecord(
                instance_id=inst.id, annotator_id=annotator_id, label=_COMMANDS[cmd]
            )
            log.write(
                json.dumps(
                    {
                        "instance_id": rec.instance_id,
                        "annotator_id": rec.annotator_id,
                        "label": rec.label,
                    },
                    ensure_ascii=False,
                    separators=(",", ":"),
                )
                + "\n"
            )
            log.flush()
            new_records.append(rec)
        print(f"session closed: {len(new_records)} new labels -> {path}", file=out)
    return new_records


@dataclass(frozen=True)
class AgreementReport:
    """Pooled pairwise agreement over a panel's records.

    raw_agreement = agreeing annotator pairs / all annotator pairs, pooled
    across instances with at least two records; `unanimous` maps instance
    id -> every annotator gave the same label; `excluded` lists instances
    with fewer than two records.
    """

    raw_agreement: float
    n_pairs: int
    unanimous: dict
    excluded: tuple


def agreement(records: Sequence[AnnotationRecord]) -> AgreementReport:
    by_instance: dict = {}
    for rec in records:
        by_instance.setdefault(rec.instance_id, []).append(rec)
    agree = total = 0
    unanimous: dict = {}
    excluded = []
    for instance_id in sorted(by_instance):
        panel = by_instance[instance_id]
        if len(panel) < 2:
            excluded.append(instance_id)
            continue
        labels = [r.label for r in panel]
        unanimous[instance_id] = len(set(labels)) == 1
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                total += 1
                agree += labels[i] == labels[j]
    if total == 0:
        raise DataError("agreement needs at least one instance with two or more records")
    return AgreementReport(
        raw_agreement=agree / total,
        n_pairs=total,
        unanimous=unanimous,
        excluded=tuple(excluded),
    )
