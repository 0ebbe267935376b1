"""Overlap metrics and descriptive statistics.

ROUGE-N here is clipped multiset n-gram matching: each n-gram contributes
min(count in reference, count in candidate) to the overlap. ROUGE-L uses
the plain longest common subsequence, full length (no truncation of either
side), no weighting. Scores live on a 0-100 scale; arithmetic is double
precision throughout.

The support score is ROUGE-1 recall with the roles swapped: the headline
acts as the reference and the source document as the candidate, so it
measures how much of the headline's wording originates in the source.
100 means every headline unigram (clipped) appears in the source, 0 means
none does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DataError
from .textkit import ngrams

__all__ = [
    "RougeScore",
    "SupportScore",
    "Histogram",
    "CorrelationResult",
    "rouge_n",
    "rouge_l",
    "lcs_length",
    "support_score",
    "pearson",
    "histogram",
]


@dataclass(frozen=True)
class RougeScore:
    """Precision / recall / F1 on a 0-100 scale."""

    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class SupportScore:
    """Source-side coverage of a headline, 0-100.

    `degenerate` flags an empty headline, where the score is 0 by
    convention but means nothing.
    """

    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class Histogram:
    """Fixed-width histogram over [0, 100]; the last bin is closed at 100."""

    bin_width: float
    bin_counts: tuple
    total: int

    def to_dict(self) -> dict:
        return {
            "bin_width": self.bin_width,
            "bin_counts": list(self.bin_counts),
            "total": self.total,
        }


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    n: int


def _f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def rouge_n(reference: Sequence[str], candidate: Sequence[str], n: int = 1) -> RougeScore:
    """Clipped multiset n-gram overlap between token sequences.

    recall = overlap / |reference n-grams|, precision = overlap /
    |candidate n-grams|; a zero denominator yields 0 for that component.
    """
    ref_grams = ngrams(reference, n)
    cand_grams = ngrams(candidate, n)
    overlap = sum((ref_grams & cand_grams).values())
    ref_total = sum(ref_grams.values())
    cand_total = sum(cand_grams.values())
    recall = 100.0 * overlap / ref_total if ref_total else 0.0
    precision = 100.0 * overlap / cand_total if cand_total else 0.0
    return RougeScore(precision=precision, recall=recall, f1=_f_measure(precision, recall))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence (iterative, O(len(a)*len(b)))."""
    if not a or not b:
        return 0
    row = [0] * (len(b) + 1)
    for tok_a in a:
        prev = 0
        for j, tok_b in enumerate(b, start=1):
            cur = row[j]
            if tok_a == tok_b:
                row[j] = prev + 1
            else:
                row[j] = max(row[j], row[j - 1])
            prev = cur
    return row[-1]


def rouge_l(reference: Sequence[str], candidate: Sequence[str]) -> RougeScore:
    """LCS-based ROUGE: recall against the reference, precision against the candidate."""
    lcs = lcs_length(reference, candidate)
    recall = 100.0 * lcs / len(reference) if reference else 0.0
    precision = 100.0 * lcs / len(candidate) if candidate else 0.0
    return RougeScore(precision=precision, recall=recall, f1=_f_measure(precision, recall))


def support_score(source: Sequence[str], headline: Sequence[str]) -> SupportScore:
    """Coverage of `headline` by `source`: ROUGE-1 recall with the headline as reference."""
    if not headline:
        return SupportScore(value=0.0, degenerate=True)
    return SupportScore(value=rouge_n(headline, source, 1).recall)


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson correlation coefficient.

    Raises DataError on length mismatch, fewer than two points, or a
    zero-variance series — never returns NaN.
    """
    if len(x) != len(y):
        raise DataError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise DataError(f"need at least 2 points, got {n}")
    mean_x = math.fsum(x) / n
    mean_y = math.fsum(y) / n
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    var_x = math.fsum(d * d for d in dx)
    var_y = math.fsum(d * d for d in dy)
    if var_x == 0.0 or var_y == 0.0:
        raise DataError("zero variance in one of the series")
    cov = math.fsum(a * b for a, b in zip(dx, dy))
    r = cov / math.sqrt(var_x * var_y)
    # Rounding can push |r| a hair past 1; clamp so downstream ranges hold.
    r = max(-1.0, min(1.0, r))
    return CorrelationResult(r=r, n=n)


def histogram(values: Sequence[float], bin_width: float) -> Histogram:
    """Histogram of values in [0, 100] with bins [k*w, (k+1)*w), last bin closed."""
    if bin_width <= 0:
        raise DataError(f"bin width must be positive, got {bin_width}")
    n_bins = round(100.0 / bin_width)
    if n_bins < 1 or abs(n_bins * bin_width - 100.0) > 1e-9:
        raise DataError(f"bin width must divide 100 evenly, got {bin_width}")
    counts = [0] * n_bins
    for v in values:
        if not 0.0 <= v <= 100.0:
            raise DataError(f"value out of range [0, 100]: {v}")
        counts[min(int(v // bin_width), n_bins - 1)] += 1
    return Histogram(bin_width=float(bin_width), bin_counts=tuple(counts), total=len(values))
