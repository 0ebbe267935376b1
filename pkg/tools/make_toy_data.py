"""Regenerate the bundled toy data under src/truthline/data/toy/.

Deterministic by construction: rerunning this script must reproduce the
shipped files byte-for-byte (the end-to-end golden test depends on it).
"""

import json
import random
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "truthline" / "data" / "toy"

# ---------------------------------------------------------------------------
# Annotation fixtures: every decision-relevant vote pattern for the 2of3 and
# 4of5 rules. Pattern ids spell the label multiset (e=entail, n=non_entail,
# i=incomprehensible); the all-i 5-panel is covered by its 3-panel twin.
# ---------------------------------------------------------------------------

PATTERNS_3 = ["eee", "een", "eei", "enn", "eni", "eii", "nnn", "nni", "nii", "iii"]
PATTERNS_5 = [
    "eeeee", "eeeen", "eeeei", "eeenn", "eeeni", "eeeii", "eennn", "eenni",
    "eenii", "eeiii", "ennnn", "ennni", "ennii", "eniii", "eiiii", "nnnnn",
    "nnnni", "nnnii", "nniii", "niiii",
]
LABEL = {"e": "entail", "n": "non_entail", "i": "incomprehensible"}


def write_annotations(path, prefix, patterns):
    lines = []
    for k, pattern in enumerate(patterns):
        # rotate the vote order so files are not sorted by label
        rotated = pattern[k % len(pattern):] + pattern[: k % len(pattern)]
        for ann, letter in enumerate(rotated, start=1):
            lines.append(
                json.dumps(
                    {
                        "instance_id": f"{prefix}-{pattern}",
                        "annotator_id": f"ann{ann}",
                        "label": LABEL[letter],
                    },
                    separators=(",", ":"),
                )
            )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# 50-instance toy corpus, Gigaword-flavored lowercase newswire. 42 instances
# survive the noise heuristics; 8 trip specific checks.
# ---------------------------------------------------------------------------

SUBJECTS = [
    ("tokyo stocks", "rose", "tuesday", "as investors snapped up bank shares"),
    ("oil prices", "fell", "monday", "after producers signaled higher output"),
    ("the dollar", "slipped", "friday", "against the yen in quiet trading"),
    ("gold futures", "climbed", "thursday", "on renewed inflation worries"),
    ("wheat prices", "surged", "wednesday", "after drought hit the plains"),
    ("copper prices", "eased", "tuesday", "as chinese demand cooled"),
    ("european shares", "advanced", "monday", "led by carmakers and banks"),
    ("asian markets", "retreated", "friday", "on profit taking"),
    ("us home sales", "jumped", "thursday", "as buyers rushed to beat higher rates"),
    ("factory output", "slowed", "wednesday", "for the third straight month"),
    ("retail sales", "rebounded", "monday", "after a weak holiday season"),
    ("consumer prices", "edged up", "tuesday", "on costlier food and fuel"),
    ("the trade deficit", "widened", "thursday", "as imports outpaced exports"),
    ("jobless claims", "dropped", "friday", "to the lowest level in a year"),
    ("housing starts", "stalled", "wednesday", "despite falling mortgage rates"),
    ("bond yields", "ticked higher", "monday", "before the auction"),
    ("the central bank", "held rates", "tuesday", "citing an uncertain outlook"),
    ("corn futures", "weakened", "thursday", "on forecasts of better weather"),
    ("natural gas", "tumbled", "friday", "as mild weather trimmed demand"),
    ("airline shares", "soared", "wednesday", "after fuel costs declined"),
]

HEADLINE_VERBS = {
    "rose": "rise", "fell": "fall", "slipped": "slips", "climbed": "climb",
    "surged": "surge", "eased": "ease", "advanced": "advance", "retreated": "retreat",
    "jumped": "jump", "slowed": "slows", "rebounded": "rebound", "edged up": "edge up",
    "widened": "widens", "dropped": "drop", "stalled": "stall", "ticked higher": "tick higher",
    "held rates": "holds rates", "weakened": "weaken", "tumbled": "tumble", "soared": "soar",
}

EXTRAS = [
    "dealers said the mood stayed cautious",
    "analysts called the move overdue",
    "officials declined to comment on the figures",
    "traders said volume was thin",
    "economists had expected a smaller change",
]


def clean_instances():
    out = []
    for k in range(40):
        subj, verb, day, clause = SUBJECTS[k % len(SUBJECTS)]
        extra = EXTRAS[k % len(EXTRAS)]
        pct = f"{(k % 9) + 1}.{k % 10} percent"
        if k < len(SUBJECTS):
            source = f"{subj} {verb} {pct} {day} {clause} , {extra} ."
            headline = f"{subj} {HEADLINE_VERBS[verb]} {pct.split()[0]} percent"
        else:
            source = f"{subj} {verb} {day} {clause} , {extra} ."
            headline = f"{subj} {HEADLINE_VERBS[verb]}"
        out.append({"id": f"toy{k:02d}", "source": source, "headline": headline})
    return out


def noisy_instances():
    return [
        # punctuation violations
        {"id": "toy40", "source": "lazio and roma will be playing for more than local bragging rights when they meet in the derby .",
         "headline": "Football : Italian Serie A table"},
        {"id": "toy41", "source": "asian shares slipped in early trade as exporters weighed a firmer yen .",
         "headline": "markets : asian shares slip"},
        {"id": "toy42", "source": "the central bank meets next week amid speculation about borrowing costs .",
         "headline": "will rates rise ?"},
        # byline / editing marks
        {"id": "toy43", "source": "heavy rain flooded low lying districts of the capital overnight , forcing evacuations .",
         "headline": "by john smith in london"},
        {"id": "toy44", "source": "oil prices climbed toward record highs as supply worries deepened .",
         "headline": "(reuters) oil prices climb"},
        {"id": "toy45", "source": "a roundup of market moves across the region follows .",
         "headline": "-- market snapshot --"},
        # no content overlap
        {"id": "toy46", "source": "police arrested two suspects hours after the downtown robbery .",
         "headline": "what they said"},
        {"id": "toy47", "source": "voters lined up early as polling stations opened across the country .",
         "headline": "image of the week"},
        # clean but with a sub-10-character source (support aggregates skip it)
        {"id": "toy48", "source": "it ended.", "headline": "trading ended"},
        {"id": "toy49", "source": "the committee approved the spending plan after a brief debate , clearing the way for a final vote .",
         "headline": "committee approves spending plan"},
    ]


def make_corpus():
    instances = clean_instances() + noisy_instances()
    assert len(instances) == 50
    lines = [
        json.dumps(
            {"id": inst["id"], "source": inst["source"], "headline": inst["headline"],
             "split": "train", "origin": "natural", "metadata": {}},
            ensure_ascii=False,
            separators=(",", ":"),
        )
        for inst in instances
    ]
    (DATA / "corpus50.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return instances


def make_outputs(instances):
    """System outputs to evaluate against corpus50: a mix of verbatim
    references, lead truncations, paraphrases, and failure cases."""
    rng = random.Random(13)
    lines = []
    for k, inst in enumerate(instances):
        if k % 7 == 0:
            headline = inst["headline"]  # perfect output
        elif k % 7 == 1:
            headline = " ".join(inst["source"].split()[:4])  # lead truncation
        elif k % 7 == 2:
            words = inst["headline"].split()
            rng.shuffle(words)
            headline = " ".join(words)  # scrambled reference
        elif k % 7 == 3:
            headline = " ".join(inst["source"].split()[:3]) + " expected soon"  # partial novel
        elif k % 7 == 4:
            headline = "officials monitor developments closely"  # unsupported guess
        elif k % 7 == 5:
            headline = " ".join(inst["source"].split()[:6])
        else:
            headline = inst["headline"].split()[0] + " update expected"
        if inst["id"] == "toy45":
            headline = ""  # degenerate empty output
        lines.append(json.dumps({"id": inst["id"], "headline": headline}, ensure_ascii=False, separators=(",", ":")))
    (DATA / "outputs50.jsonl").write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_stub_scores(instances):
    """Scripted probabilities for the deterministic stub scorer: roughly 70%
    of ids score high, the rest low, fixed by seed."""
    rng = random.Random(99)
    scores = {}
    for inst in instances:
        high = rng.random() < 0.7
        scores[inst["id"]] = round(rng.uniform(0.75, 0.99), 4) if high else round(rng.uniform(0.01, 0.35), 4)
    path = Path(__file__).resolve().parent.parent / "tests" / "golden" / "stub_scores.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(scores, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    write_annotations(DATA / "annotations_2of3.jsonl", "g", PATTERNS_3)
    write_annotations(DATA / "annotations_4of5.jsonl", "j", PATTERNS_5)
    instances = make_corpus()
    make_outputs(instances)
    make_stub_scores(instances)
    print(f"wrote toy data under {DATA}")


if __name__ == "__main__":
    main()
