# The three corpus noise heuristics: content overlap, byline marks, and
# question-mark/colon headlines. Run: python demos/02_noise_heuristics.py

from truthline import Instance, NoiseFilterConfig, apply_noise_filters, default_stopwords
from truthline.textkit import TokenizerConfig

config = NoiseFilterConfig(
    stopwords=default_stopwords("english"),
    tokenizer=TokenizerConfig(mode="unicode_word", lowercase=True),
)

pairs = [
    ("tokyo stocks rose tuesday on bank shares", "tokyo stocks rise"),
    ("lazio and roma meet in the derby this weekend", "Football : Italian Serie A table"),
    ("heavy rain flooded the capital overnight", "by john smith in london"),
    ("oil prices climbed toward record highs", "(reuters) oil prices climb"),
    ("police arrested two suspects downtown", "what they said"),
    ("the central bank meets next week", "will rates rise ?"),
]

for source, headline in pairs:
    verdict = apply_noise_filters(Instance(id="demo", source=source, headline=headline), config)
    flag = "keep  " if verdict.keep else "drop  "
    reasons = ", ".join(sorted(verdict.violations)) or "-"
    print(f"{flag} {headline!r:45}  {reasons}")

# Checks can be disabled individually; a verdict only ever accumulates
# violations from enabled checks, so disabling one never drops more data.
loose = NoiseFilterConfig(
    stopwords=config.stopwords,
    tokenizer=config.tokenizer,
    enabled=frozenset({"byline_marks"}),
)
inst = Instance(id="demo", source="the central bank meets next week", headline="will rates rise ?")
print("\nwith only the byline check enabled:", apply_noise_filters(inst, loose))
