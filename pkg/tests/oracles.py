"""Independent brute-force reference implementations.

These stay deliberately naive (position scans, exhaustive subsequence
enumeration, closed-form sums) so they share no code path with the
library. Every frozen expected value in the test suite was computed with
these, or by hand following the same arithmetic.
"""

from itertools import combinations


def ngram_list(tokens, n):
    """All contiguous n-grams by position scan, as a list (keeps multiplicity)."""
    out = []
    for i in range(len(tokens)):
        if i + n <= len(tokens):
            out.append(tuple(tokens[i : i + n]))
    return out


def rouge_n_prf(reference, candidate, n):
    """Clipped n-gram overlap via list.count, no Counter anywhere."""
    ref_grams = ngram_list(reference, n)
    cand_grams = ngram_list(candidate, n)
    overlap = 0
    for gram in set(ref_grams) | set(cand_grams):
        overlap += min(ref_grams.count(gram), cand_grams.count(gram))
    recall = 100.0 * overlap / len(ref_grams) if ref_grams else 0.0
    precision = 100.0 * overlap / len(cand_grams) if cand_grams else 0.0
    f1 = 0.0 if precision + recall == 0 else 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


def is_subsequence(sub, seq):
    it = iter(seq)
    return all(tok in it for tok in sub)


def lcs_brute(a, b):
    """LCS length by enumerating subsequences of the shorter sequence."""
    short, long_ = (a, b) if len(a) <= len(b) else (b, a)
    for k in range(len(short), 0, -1):
        for combo in combinations(short, k):
            if is_subsequence(combo, long_):
                return k
    return 0


def rouge_l_prf(reference, candidate):
    lcs = lcs_brute(list(reference), list(candidate))
    recall = 100.0 * lcs / len(reference) if reference else 0.0
    precision = 100.0 * lcs / len(candidate) if candidate else 0.0
    f1 = 0.0 if precision + recall == 0 else 2.0 * precision * recall / (precision + recall)
    return precision, recall, f1


def support_brute(source, headline):
    """Fraction of headline unigrams (clipped) found in the source, 0-100."""
    if not headline:
        return 0.0
    matched = 0
    for tok in set(headline):
        matched += min(list(headline).count(tok), list(source).count(tok))
    return 100.0 * matched / len(headline)


def pearson_closed_form(x, y):
    """Textbook definitional formula with plain sums."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    num = sum((a - mx) * (b - my) for a, b in zip(x, y))
    den = (sum((a - mx) ** 2 for a in x) * sum((b - my) ** 2 for b in y)) ** 0.5
    return num / den


def histogram_brute(values, width):
    """Count values per bin by explicit interval tests."""
    n_bins = int(round(100.0 / width))
    counts = [0] * n_bins
    for v in values:
        for k in range(n_bins):
            lo, hi = k * width, (k + 1) * width
            last = k == n_bins - 1
            if (lo <= v < hi) or (last and lo <= v <= 100.0):
                counts[k] += 1
                break
    return counts
