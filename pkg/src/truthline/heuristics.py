"""Noise filters used to build a headline-generation training corpus.

Three checks, each answering "is this instance clean?":

1. content overlap — source and headline must share at least one
   non-stopword token;
2. byline marks — the headline must not carry bylines or editing marks
   (pattern inventory is configuration, see data/byline_markers.txt);
3. punctuation — the headline must not contain a question mark or colon
   (ASCII or full-width).

All checks are pure; a verdict lists every violated check, so disabling
one check can only ever keep more instances.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

from .corpus import Instance
from .errors import DataError
from .textkit import StopwordList, TokenizerConfig, content_tokens, tokenize

__all__ = [
    "NO_CONTENT_OVERLAP",
    "BYLINE_MARKS",
    "QUESTION_OR_COLON",
    "ALL_CHECKS",
    "HeuristicVerdict",
    "NoiseFilterConfig",
    "default_byline_patterns",
    "load_marker_patterns",
    "check_content_overlap",
    "check_byline_marks",
    "check_punctuation",
    "apply_noise_filters",
]

NO_CONTENT_OVERLAP = "no_content_overlap"
BYLINE_MARKS = "byline_marks"
QUESTION_OR_COLON = "question_or_colon"
ALL_CHECKS = (NO_CONTENT_OVERLAP, BYLINE_MARKS, QUESTION_OR_COLON)

_BAD_PUNCTUATION = "?:？："


@dataclass(frozen=True)
class HeuristicVerdict:
    keep: bool
    violations: frozenset

    def __post_init__(self):
        if self.keep != (not self.violations):
            raise DataError("verdict keep flag inconsistent with violations")


def _compile(patterns: Sequence[str]):
    try:
        return tuple(re.compile(p, re.IGNORECASE) for p in patterns)
    except re.error as exc:
        raise DataError(f"bad marker pattern: {exc}") from exc


def load_marker_patterns(path):
    """Marker pattern file: one regex per line, UTF-8, ``#`` comments ignored."""
    lines = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.strip() and not line.lstrip().startswith("#"):
                lines.append(line)
    if not lines:
        raise DataError(f"{path}: no marker patterns")
    return _compile(lines)


def default_byline_patterns():
    """Byline/editing-mark patterns shipped with the package."""
    ref = resources.files("truthline").joinpath("data/byline_markers.txt")
    lines = [
        line
        for line in ref.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    return _compile(lines)


def check_content_overlap(source_tokens, headline_tokens, stopwords: StopwordList) -> bool:
    """True iff source and headline share at least one content token (case-insensitive)."""
    src = {t.lower() for t in content_tokens(source_tokens, stopwords)}
    head = {t.lower() for t in content_tokens(headline_tokens, stopwords)}
    return bool(src & head)


def check_byline_marks(headline: str, patterns=None) -> bool:
    """True iff no byline/editing-mark pattern matches the headline."""
    if patterns is None:
        patterns = default_byline_patterns()
    if not patterns:
        raise DataError("byline check needs at least one marker pattern")
    compiled = _compile(patterns) if patterns and isinstance(patterns[0], str) else patterns
    return not any(p.search(headline) for p in compiled)


def check_punctuation(headline: str) -> bool:
    """True iff the headline contains neither a question mark nor a colon."""
    return not any(ch in headline for ch in _BAD_PUNCTUATION)


@dataclass(frozen=True)
class NoiseFilterConfig:
    stopwords: StopwordList = field(default_factory=StopwordList)
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)
    byline_patterns: tuple = ()
    enabled: frozenset = frozenset(ALL_CHECKS)

    def __post_init__(self):
        unknown = self.enabled - set(ALL_CHECKS)
        if unknown:
            raise DataError(f"unknown heuristic checks: {sorted(unknown)}")


def apply_noise_filters(instance: Instance, config: NoiseFilterConfig) -> HeuristicVerdict:
    """Run every enabled check; violations accumulate, order never matters."""
    violations = set()
    if NO_CONTENT_OVERLAP in config.enabled:
        src = tokenize(config.tokenizer, instance.source)
        head = tokenize(config.tokenizer, instance.headline)
        if not check_content_overlap(src, head, config.stopwords):
            violations.add(NO_CONTENT_OVERLAP)
    if BYLINE_MARKS in config.enabled:
        patterns = config.byline_patterns or default_byline_patterns()
        if not check_byline_marks(instance.headline, patterns):
            violations.add(BYLINE_MARKS)
    if QUESTION_OR_COLON in config.enabled:
        if not check_punctuation(instance.headline):
            violations.add(QUESTION_OR_COLON)
    return HeuristicVerdict(keep=not violations, violations=frozenset(violations))
