# The lexical entailment baseline: logistic regression over overlap
# features, trained from scratch, deterministic to the last bit.
# Run: python demos/04_lexical_scorer.py

import random

from truthline import (
    Instance,
    LexicalScorer,
    extract_features,
    StopwordList,
    train_lexical,
)
from truthline.entailment import evaluate_model
from truthline.textkit import TokenizerConfig, tokenize

rng = random.Random(0)
vocab = [f"w{i}" for i in range(60)]

# Synthetic supervision: entailed headlines reuse source words, the rest
# are made of out-of-source words, so the classes are linearly separable.
labeled = []
for k in range(300):
    source = rng.sample(vocab, 12)
    if k % 2 == 0:
        headline, label = source[:5], "entail"
    else:
        headline, label = rng.sample([w + "x" for w in vocab], 5), "non_entail"
    labeled.append((Instance(id=f"s{k}", source=" ".join(source), headline=" ".join(headline)), label))

# Features are plain overlap statistics; the pair below shares 2 of 3
# headline tokens with the source.
tok = TokenizerConfig()
feats = extract_features(tokenize(tok, "w1 w2 w3 w4"), tokenize(tok, "w1 w2 zz"), StopwordList())
print("features:", feats)

model = train_lexical(labeled, epochs=120, learning_rate=0.5, seed=0)
curve = model.training_meta["loss_curve"]
print(f"\ntrained {model.training_meta['epochs']} epochs, loss {curve[0]:.4f} -> {curve[-1]:.4f}")

report = evaluate_model(model, labeled)
print("training accuracy:", report["accuracy"], "confusion:", report["confusion"])

scorer = LexicalScorer(model)
for premise, hypothesis in [
    ("w1 w2 w3 w4 w5 w6", "w1 w2 w3"),
    ("w1 w2 w3 w4 w5 w6", "q1 q2 q3"),
]:
    print(f"P(entail | {hypothesis!r}) = {scorer.score_one(premise, hypothesis):.4f}")
