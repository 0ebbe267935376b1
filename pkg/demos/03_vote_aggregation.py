# Majority-vote aggregation of entailment annotations, and inter-annotator
# agreement. Run: python demos/03_vote_aggregation.py

from truthline import MajorityRule, agreement, aggregate_votes, entail_ratio
from truthline.corpus import read_annotations
import truthline

toy = truthline.bundled_data_dir() / "toy"

# The bundled fixture covers every vote pattern a 3-annotator panel can
# produce. A side needs 2 of 3 votes; incomprehensible votes count toward
# the total but toward neither side.
records = read_annotations(toy / "annotations_2of3.jsonl")
labels = aggregate_votes(records, MajorityRule.parse("2of3"))
for lab in labels:
    print(f"{lab.instance_id:8}  {lab.label:11}  {lab.votes_for}/{lab.votes_total}")

print("\nentail ratio (undecided in denominator):", round(entail_ratio(labels), 3))
print("entail ratio (undecided excluded):      ", round(entail_ratio(labels, exclude_undecided=True), 3))

# Crowd panels of five need a 4-of-5 supermajority before a pair enters
# the supervision data; everything else stays undecided and is excluded.
crowd = aggregate_votes(read_annotations(toy / "annotations_4of5.jsonl"), MajorityRule(4, 5))
decided = [lab for lab in crowd if lab.label != "undecided"]
print(f"\n4of5 rule: {len(decided)} of {len(crowd)} panels reach a supermajority")

# Raw pairwise agreement over the 3-annotator panels.
report = agreement(records)
print(f"pairwise agreement: {report.raw_agreement:.3f} over {report.n_pairs} annotator pairs")
print("unanimous panels:", sorted(i for i, u in report.unanimous.items() if u))
