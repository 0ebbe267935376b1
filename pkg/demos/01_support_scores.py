# Support scores: how much of a headline's wording comes from its source?
#
# The support score is ROUGE-1 recall with the roles swapped: the headline
# plays the reference and the source document the candidate. 100 means
# every headline word (with multiplicity) appears in the source; 0 means
# none does. Run: python demos/01_support_scores.py

from truthline import TokenizerConfig, histogram, rouge_n, support_score, tokenize

tok = TokenizerConfig(mode="whitespace", lowercase=True)

source = tokenize(tok, "tokyo stocks rose tuesday as investors snapped up bank shares")
for headline in (
    "tokyo stocks rose",            # fully supported
    "tokyo stocks rise",            # one paraphrased word
    "tokyo stocks rise in november",  # unsupported detail
    "dollar slides against yen",    # nothing from the source
):
    score = support_score(source, tokenize(tok, headline))
    print(f"{score.value:6.2f}  {headline}")

# The same pair under conventional ROUGE orientation, for contrast: the
# reference headline scores the candidate output.
reference = tokenize(tok, "tokyo stocks rise")
candidate = tokenize(tok, "tokyo stocks rose tuesday")
r = rouge_n(reference, candidate, 1)
print(f"\nconventional ROUGE-1  P={r.precision:.1f} R={r.recall:.1f} F1={r.f1:.1f}")

# Support scores over a batch become a histogram (the shape used to judge
# how truthful a system's outputs are overall).
values = [
    support_score(source, tokenize(tok, h)).value
    for h in ("tokyo stocks rose", "stocks rose tuesday", "yen slides", "bank shares up")
]
hist = histogram(values, bin_width=25)
print("\nbin counts (width 25):", list(hist.bin_counts), "n =", hist.total)
