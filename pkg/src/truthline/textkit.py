"""Tokenization, normalization, and n-gram extraction.

Every metric and feature computation in the toolkit runs over token
sequences produced here. Three built-in modes are provided:

* ``whitespace`` — split on runs of whitespace. Also the seam for external
  tokenizers: feed their output back in as whitespace-joined text.
* ``unicode_word`` — maximal runs of Unicode word characters; punctuation
  and whitespace are discarded.
* ``character`` — one token per grapheme cluster (approximated), skipping
  whitespace. The sane default for unsegmented scripts.

All functions are pure and deterministic; identical (config, text) pairs
always yield identical token sequences.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Iterator, Sequence

from .errors import DataError

__all__ = [
    "TOKENIZER_MODES",
    "TokenizerConfig",
    "StopwordList",
    "tokenize",
    "ngrams",
    "content_tokens",
    "default_stopwords",
]

TOKENIZER_MODES = ("unicode_word", "whitespace", "character")

_WORD_RE = re.compile(r"\w+", re.UNICODE)

# Categories that attach to the preceding grapheme cluster.
_COMBINING_CATEGORIES = frozenset({"Mn", "Mc", "Me"})
_ZWJ = "‍"


@dataclass(frozen=True)
class TokenizerConfig:
    """How raw text becomes tokens.

    mask_digits replaces each Unicode decimal digit with ``#`` (applied
    per token, after splitting, so segmentation is unaffected).
    """

    mode: str = "unicode_word"
    lowercase: bool = False
    mask_digits: bool = False

    def __post_init__(self):
        if self.mode not in TOKENIZER_MODES:
            raise DataError(f"unknown tokenizer mode: {self.mode!r} (expected one of {TOKENIZER_MODES})")


@dataclass(frozen=True)
class StopwordList:
    """Set of stopword tokens with case-insensitive membership."""

    words: frozenset = frozenset()

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "StopwordList":
        return cls(frozenset(w.strip().lower() for w in words if w.strip()))

    @classmethod
    def from_file(cls, path) -> "StopwordList":
        """Load a stopword file: UTF-8, one token per line, ``#`` comments ignored."""
        words = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line and not line.startswith("#"):
                    words.append(line)
        return cls.from_words(words)

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self) -> Iterator[str]:
        return iter(self.words)


def default_stopwords(language: str = "english") -> StopwordList:
    """Stopword list shipped with the package (``english`` or ``japanese``)."""
    ref = resources.files("truthline").joinpath(f"data/stopwords/{language}.txt")
    if not ref.is_file():
        raise DataError(f"no bundled stopword list for language {language!r}")
    words = [
        line.strip()
        for line in ref.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    return StopwordList.from_words(words)


def _grapheme_clusters(text: str) -> list[str]:
    """Approximate extended grapheme clusters.

    Combining marks, zero-width joiners, and variation selectors attach to
    the preceding cluster, and a character following a ZWJ joins as well.
    Good enough for the scripts this toolkit targets without pulling in a
    full UAX #29 segmenter.
    """
    clusters: list[str] = []
    join_next = False
    for ch in text:
        attaches = (
            unicodedata.category(ch) in _COMBINING_CATEGORIES
            or ch == _ZWJ
            or "︀" <= ch <= "️"
        )
        if clusters and (attaches or join_next):
            clusters[-1] += ch
        else:
            clusters.append(ch)
        join_next = ch == _ZWJ
    return clusters


def _mask_digits(token: str) -> str:
    return "".join("#" if ch.isdecimal() else ch for ch in token)


def tokenize(config: TokenizerConfig, text: str) -> list[str]:
    """Split `text` into tokens per `config`. Total: never raises on valid Unicode."""
    if config.mode == "whitespace":
        tokens = text.split()
    elif config.mode == "unicode_word":
        tokens = _WORD_RE.findall(text)
    else:  # character
        tokens = [c for c in _grapheme_clusters(text) if not c.isspace()]
    if config.lowercase:
        tokens = [t.lower() for t in tokens]
    if config.mask_digits:
        tokens = [_mask_digits(t) for t in tokens]
    return tokens


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """All contiguous n-grams of `tokens` with multiplicity.

    Returns an empty multiset when the sequence is shorter than n.
    """
    if n < 1:
        raise DataError(f"n must be >= 1, got {n}")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def content_tokens(tokens: Sequence[str], stopwords: StopwordList) -> list[str]:
    """Tokens that are not stopwords, order preserved (lookup is case-insensitive)."""
    return [t for t in tokens if t not in stopwords]
