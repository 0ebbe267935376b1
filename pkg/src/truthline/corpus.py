"""Data model, serialization, corpus statistics, and vote aggregation.

The canonical interchange format is JSONL with a fixed key order
(id, source, headline, split, origin, metadata), one compact object per
line; TSV (id<TAB>source<TAB>headline, no header) is supported for
wire-style dumps. Both formats stream, so million-instance files never
need to fit an intermediate representation.
"""

from __future__ import annotations

import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CorpusFormatError, DataError
from .textkit import TokenizerConfig, tokenize

__all__ = [
    "SPLITS",
    "ORIGINS",
    "ANNOTATION_LABELS",
    "AGGREGATE_LABELS",
    "Instance",
    "AnnotationRecord",
    "AggregatedLabel",
    "MajorityRule",
    "CorpusStats",
    "SentenceSplitter",
    "read_instances",
    "write_instances",
    "read_annotations",
    "write_annotations",
    "read_aggregated",
    "write_aggregated",
    "aggregate_votes",
    "entail_ratio",
    "corpus_stats",
]

log = logging.getLogger(__name__)

SPLITS = ("train", "dev", "test")
ORIGINS = ("natural", "pseudo")
ANNOTATION_LABELS = ("entail", "non_entail", "incomprehensible")
AGGREGATE_LABELS = ("entail", "non_entail", "undecided")

_INSTANCE_KEYS = ("id", "source", "headline", "split", "origin", "metadata")


@dataclass
class Instance:
    """One article-headline pair, the unit flowing through every pipeline stage."""

    id: str
    source: str
    headline: str
    split: str = "train"
    origin: str = "natural"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.id:
            raise DataError("instance id must be non-empty")
        if self.split not in SPLITS:
            raise DataError(f"instance {self.id!r}: unknown split {self.split!r}")
        if self.origin not in ORIGINS:
            raise DataError(f"instance {self.id!r}: unknown origin {self.origin!r}")
        if self.origin == "pseudo" and "generator" not in self.metadata:
            raise DataError(f"instance {self.id!r}: pseudo origin requires metadata['generator']")

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "source": self.source,
            "headline": self.headline,
            "split": self.split,
            "origin": self.origin,
            "metadata": {k: self.metadata[k] for k in sorted(self.metadata)},
        }

    @classmethod
    def from_json_dict(cls, obj: Mapping) -> "Instance":
        if not isinstance(obj, Mapping):
            raise DataError(f"expected a JSON object, got {type(obj).__name__}")
        for key in ("id", "source", "headline"):
            if key not in obj:
                raise DataError(f"missing required key {key!r}")
        metadata = obj.get("metadata", {})
        if not isinstance(metadata, Mapping):
            raise DataError("metadata must be an object")
        return cls(
            id=str(obj["id"]),
            source=str(obj["source"]),
            headline=str(obj["headline"]),
            split=str(obj.get("split", "train")),
            origin=str(obj.get("origin", "natural")),
            metadata={str(k): str(v) for k, v in metadata.items()},
        )


@dataclass(frozen=True)
class AnnotationRecord:
    """One annotator's entailment judgment for one instance."""

    instance_id: str
    annotator_id: str
    label: str

    def __post_init__(self):
        if self.label not in ANNOTATION_LABELS:
            raise DataError(
                f"annotation for {self.instance_id!r}: unknown label {self.label!r} "
                f"(expected one of {ANNOTATION_LABELS})"
            )


@dataclass(frozen=True)
class AggregatedLabel:
    """Majority-vote resolution of one instance's annotation panel.

    `votes_for` counts votes for the assigned label; for undecided panels
    it is the larger of the two sides. Incomprehensible votes count toward
    `votes_total` but toward neither side.
    """

    instance_id: str
    label: str
    votes_for: int
    votes_total: int

    def __post_init__(self):
        if self.label not in AGGREGATE_LABELS:
            raise DataError(f"unknown aggregate label {self.label!r}")
        if self.votes_for > self.votes_total:
            raise DataError(f"{self.instance_id!r}: votes_for exceeds votes_total")


@dataclass(frozen=True)
class MajorityRule:
    """Qualifying-majority rule: a side wins with at least `min_agree` of `panel_size` votes."""

    min_agree: int
    panel_size: int

    def __post_init__(self):
        if not 1 <= self.min_agree <= self.panel_size:
            raise DataError(f"invalid rule: {self.min_agree} of {self.panel_size}")
        if self.min_agree * 2 <= self.panel_size:
            raise DataError(
                f"rule {self.min_agree}of{self.panel_size} allows two qualifying majorities"
            )

    @classmethod
    def parse(cls, text: str) -> "MajorityRule":
        """Parse a rule spelled like ``2of3`` or ``4of5``."""
        parts = text.lower().split("of")
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise DataError(f"cannot parse majority rule {text!r} (expected e.g. 2of3)")
        return cls(min_agree=int(parts[0]), panel_size=int(parts[1]))

    def __str__(self) -> str:
        return f"{self.min_agree}of{self.panel_size}"


@dataclass(frozen=True)
class CorpusStats:
    n_docs: int
    n_headline_words: int
    n_source_words: int
    sents_per_doc: float
    words_per_doc: float
    words_per_headline: float

    def to_dict(self) -> dict:
        return {
            "n_docs": self.n_docs,
            "n_headline_words": self.n_headline_words,
            "n_source_words": self.n_source_words,
            "sents_per_doc": self.sents_per_doc,
            "words_per_doc": self.words_per_doc,
            "words_per_headline": self.words_per_headline,
        }


# --------------------------------------------------------------------------
# TSV escaping: tabs, newlines, carriage returns, and backslashes inside
# fields. A raw CR would be folded by universal-newline reading, so it is
# escaped as well.
# --------------------------------------------------------------------------

_TSV_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_TSV_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def _tsv_escape(field_text: str) -> str:
    out = field_text
    for raw, esc in _TSV_ESCAPES.items():
        out = out.replace(raw, esc)
    return out


def _tsv_unescape(field_text: str) -> str:
    out = []
    i = 0
    while i < len(field_text):
        ch = field_text[i]
        if ch == "\\":
            if i + 1 >= len(field_text):
                raise DataError("dangling backslash in TSV field")
            nxt = field_text[i + 1]
            if nxt not in _TSV_UNESCAPES:
                raise DataError(f"unknown TSV escape \\{nxt}")
            out.append(_TSV_UNESCAPES[nxt])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _parse_jsonl_line(line: str) -> Instance:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid JSON: {exc.msg}") from exc
    return Instance.from_json_dict(obj)


def _parse_tsv_line(line: str, split: str) -> Instance:
    parts = line.split("\t")
    if len(parts) != 3:
        raise DataError(f"expected 3 tab-separated fields, got {len(parts)}")
    ident, source, headline = (_tsv_unescape(p) for p in parts)
    return Instance(id=ident, source=source, headline=headline, split=split)


def read_instances(path, format: str = "jsonl", *, split: str = "train", lenient: bool = False) -> list:
    """Read a dataset file into a list of Instance.

    `split` applies to TSV rows only (the format carries no split column).
    Malformed lines abort ingestion with a CorpusFormatError carrying every
    offending line number, unless `lenient` is set, in which case they are
    skipped and logged. Duplicate ids are always an error, naming both
    line numbers.
    """
    if format not in ("jsonl", "tsv"):
        raise DataError(f"unknown dataset format {format!r}")
    instances: list[Instance] = []
    errors: list[tuple[int, str]] = []
    first_line: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            try:
                if format == "jsonl":
                    inst = _parse_jsonl_line(line)
                else:
                    inst = _parse_tsv_line(line, split)
            except DataError as exc:
                errors.append((lineno, str(exc)))
                continue
            if inst.id in first_line:
                raise DataError(
                    f"{path}: duplicate id {inst.id!r} on lines {first_line[inst.id]} and {lineno}"
                )
            first_line[inst.id] = lineno
            instances.append(inst)
    if errors:
        if not lenient:
            raise CorpusFormatError(path, errors)
        for lineno, msg in errors:
            log.warning("%s: skipped malformed line %d: %s", path, lineno, msg)
    return instances


def write_instances(dataset: Sequence[Instance], path, format: str = "jsonl") -> None:
    """Write a dataset; read_instances(write_instances(d)) round-trips field-for-field."""
    if format not in ("jsonl", "tsv"):
        raise DataError(f"unknown dataset format {format!r}")
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for inst in dataset:
                if format == "jsonl":
                    fh.write(json.dumps(inst.to_json_dict(), ensure_ascii=False, separators=(",", ":")))
                else:
                    fh.write("\t".join(_tsv_escape(f) for f in (inst.id, inst.source, inst.headline)))
                fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def read_annotations(path) -> list:
    """Read annotations.jsonl: {"instance_id","annotator_id","label"} per line.

    A leading session-log header object ({"header": {...}}) is skipped.
    Duplicate (instance, annotator) pairs are an error.
    """
    records: list[AnnotationRecord] = []
    errors: list[tuple[int, str]] = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                errors.append((lineno, f"invalid JSON: {exc.msg}"))
                continue
            if isinstance(obj, dict) and "header" in obj:
                continue
            try:
                rec = AnnotationRecord(
                    instance_id=str(obj["instance_id"]),
                    annotator_id=str(obj["annotator_id"]),
                    label=str(obj["label"]),
                )
            except (KeyError, TypeError) as exc:
                errors.append((lineno, f"bad annotation record: {exc}"))
                continue
            except DataError as exc:
                errors.append((lineno, str(exc)))
                continue
            key = (rec.instance_id, rec.annotator_id)
            if key in seen:
                raise DataError(
                    f"{path}: duplicate annotation for {key} on lines {seen[key]} and {lineno}"
                )
            seen[key] = lineno
            records.append(rec)
    if errors:
        raise CorpusFormatError(path, errors)
    return records


def write_annotations(records: Sequence[AnnotationRecord], path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for rec in records:
                fh.write(
                    json.dumps(
                        {
                            "instance_id": rec.instance_id,
                            "annotator_id": rec.annotator_id,
                            "label": rec.label,
                        },
                        ensure_ascii=False,
                        separators=(",", ":"),
                    )
                )
                fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def read_aggregated(path) -> list:
    labels: list[AggregatedLabel] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                labels.append(
                    AggregatedLabel(
                        instance_id=str(obj["instance_id"]),
                        label=str(obj["label"]),
                        votes_for=int(obj["votes_for"]),
                        votes_total=int(obj["votes_total"]),
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise CorpusFormatError(path, [(lineno, str(exc))]) from exc
    return labels


def write_aggregated(labels: Sequence[AggregatedLabel], path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            for lab in labels:
                fh.write(
                    json.dumps(
                        {
                            "instance_id": lab.instance_id,
                            "label": lab.label,
                            "votes_for": lab.votes_for,
                            "votes_total": lab.votes_total,
                        },
                        ensure_ascii=False,
                        separators=(",", ":"),
                    )
                )
                fh.write("\n")
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def aggregate_votes(records: Iterable[AnnotationRecord], rule: MajorityRule) -> list:
    """Resolve per-annotator judgments into one label per instance.

    A side wins with >= rule.min_agree votes; otherwise the panel is
    undecided. Incomprehensible votes count toward the total only. The
    result is sorted by instance id, so record order never matters.
    """
    by_instance: dict[str, list[AnnotationRecord]] = defaultdict(list)
    for rec in records:
        by_instance[rec.instance_id].append(rec)
    out: list[AggregatedLabel] = []
    for instance_id in sorted(by_instance):
        panel = by_instance[instance_id]
        if len(panel) > rule.panel_size:
            raise DataError(
                f"instance {instance_id!r} has {len(panel)} records, "
                f"more than panel size {rule.panel_size}"
            )
        annotators = [r.annotator_id for r in panel]
        if len(set(annotators)) != len(annotators):
            raise DataError(f"instance {instance_id!r} has duplicate annotator records")
        n_entail = sum(1 for r in panel if r.label == "entail")
        n_non = sum(1 for r in panel if r.label == "non_entail")
        if n_entail >= rule.min_agree:
            label, votes_for = "entail", n_entail
        elif n_non >= rule.min_agree:
            label, votes_for = "non_entail", n_non
        else:
            label, votes_for = "undecided", max(n_entail, n_non)
        out.append(
            AggregatedLabel(
                instance_id=instance_id, label=label, votes_for=votes_for, votes_total=len(panel)
            )
        )
    return out


def entail_ratio(labels: Sequence[AggregatedLabel], *, exclude_undecided: bool = False) -> float:
    """Fraction of panels resolved as entail.

    By default undecided panels stay in the denominator (counted as
    non-entailing); `exclude_undecided` drops them instead. Report both
    numbers when comparing against externally published ratios.
    """
    pool = [l for l in labels if not (exclude_undecided and l.label == "undecided")]
    if not pool:
        raise DataError("no panels to compute a ratio over")
    return sum(1 for l in pool if l.label == "entail") / len(pool)


# --------------------------------------------------------------------------
# Corpus statistics
# --------------------------------------------------------------------------

_DEFAULT_ABBREVIATIONS = frozenset(
    {"mr", "mrs", "ms", "dr", "prof", "gen", "sen", "rep", "st", "jr", "sr",
     "etc", "vs", "no", "inc", "ltd", "co", "e.g", "i.e", "u.s", "u.n", "u.k"}
)


@dataclass(frozen=True)
class SentenceSplitter:
    """Terminal-punctuation sentence splitter with an abbreviation guard.

    A terminator ends a sentence only when followed by whitespace or end of
    text, and (for '.') when the preceding word is not a known abbreviation.
    """

    terminators: str = ".!?。"
    abbreviations: frozenset = _DEFAULT_ABBREVIATIONS

    def split(self, text: str) -> list:
        sentences = []
        buf: list[str] = []
        for i, ch in enumerate(text):
            buf.append(ch)
            if ch not in self.terminators:
                continue
            nxt = text[i + 1] if i + 1 < len(text) else None
            if ch != "。" and nxt is not None and not nxt.isspace():
                continue
            if ch == ".":
                word = "".join(buf).rstrip(".").rsplit(None, 1)
                if word and word[-1].lower().lstrip("(\"'") in self.abbreviations:
                    continue
            sentence = "".join(buf).strip()
            if sentence:
                sentences.append(sentence)
            buf = []
        tail = "".join(buf).strip()
        if tail:
            sentences.append(tail)
        return sentences


def corpus_stats(
    dataset: Sequence[Instance],
    tokenizer_config: TokenizerConfig | None = None,
    splitter: SentenceSplitter | None = None,
) -> CorpusStats:
    """Size and average-length statistics over a dataset."""
    if not dataset:
        raise DataError("cannot compute statistics over an empty dataset")
    tokenizer_config = tokenizer_config or TokenizerConfig()
    splitter = splitter or SentenceSplitter()
    n_docs = len(dataset)
    n_headline_words = 0
    n_source_words = 0
    n_sents = 0
    for inst in dataset:
        n_headline_words += len(tokenize(tokenizer_config, inst.headline))
        n_source_words += len(tokenize(tokenizer_config, inst.source))
        n_sents += len(splitter.split(inst.source))
    return CorpusStats(
        n_docs=n_docs,
        n_headline_words=n_headline_words,
        n_source_words=n_source_words,
        sents_per_doc=n_sents / n_docs,
        words_per_doc=n_source_words / n_docs,
        words_per_headline=n_headline_words / n_docs,
    )
