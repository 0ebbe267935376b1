# The full curation pipeline as a library: noise heuristics, entailment
# filtering with accounting, self-training pseudo pairs, and a
# table-shaped evaluation report. Run: python demos/05_filter_and_pseudo.py

import json
from pathlib import Path

import truthline
from truthline import (
    LeadTruncateGenerator,
    NoiseFilterConfig,
    assemble_training_set,
    default_stopwords,
    evaluate,
    filter_entailment,
    generate_pseudo,
    noise_filter,
)
from truthline.corpus import read_instances
from truthline.testing import ScriptedScorer
from truthline.textkit import TokenizerConfig

toy = truthline.bundled_data_dir() / "toy"
dataset = read_instances(toy / "corpus50.jsonl")
tok = TokenizerConfig(mode="unicode_word", lowercase=True)

# Stage 1: the noise heuristics.
kept, removed, report = noise_filter(
    dataset, NoiseFilterConfig(stopwords=default_stopwords("english"), tokenizer=tok)
)
print(f"noise filter: kept {report.kept_count}/{report.input_count}  reasons={report.per_reason}")

# Stage 2: entailment filtering. Any object with score_many works as a
# scorer; here a scripted one stands in for a real classifier.
scores = json.loads((Path(__file__).parent.parent / "tests" / "golden" / "stub_scores.json").read_text())
ekept, eremoved, ereport = filter_entailment(kept, ScriptedScorer(scores), threshold=0.5)
print(f"entailment filter: kept {ereport.kept_count}/{ereport.input_count} ({ereport.kept_ratio:.0%})")

# Stage 3: self-training pseudo pairs for the discarded sources, so the
# filtered corpus regains its pre-filter size.
pseudo = generate_pseudo(eremoved, LeadTruncateGenerator(5))
train = assemble_training_set(ekept, pseudo, "filtered_plus_pseudo")
print(f"assembled: {len(ekept)} kept + {len(pseudo)} pseudo = {len(train)} instances")
print("an assembled pseudo pair:", train[-1])

# Stage 4: evaluate system outputs against references (here: the bundled
# toy outputs), with the scripted scorer providing the entailment ratio.
outputs = [
    (json.loads(line)["id"], json.loads(line)["headline"])
    for line in (toy / "outputs50.jsonl").read_text().splitlines()
]
result = evaluate(outputs, dataset, ScriptedScorer(scores), tokenizer=tok)
print("\n" + result.format_table())
