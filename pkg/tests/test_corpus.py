import json
import tempfile
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from truthline.corpus import (
    AnnotationRecord,
    Instance,
    MajorityRule,
    SentenceSplitter,
    aggregate_votes,
    corpus_stats,
    entail_ratio,
    read_annotations,
    read_instances,
    write_annotations,
    write_instances,
)
from truthline.errors import CorpusFormatError, DataError
from truthline.textkit import TokenizerConfig

text_st = st.text(max_size=40)
id_st = st.text(min_size=1, max_size=20)
instance_st = st.builds(
    Instance,
    id=id_st,
    source=text_st,
    headline=text_st,
    split=st.sampled_from(["train", "dev", "test"]),
    origin=st.just("natural"),
    metadata=st.dictionaries(st.text(min_size=1, max_size=8), st.text(max_size=8), max_size=3),
)


def votes(instance_id, labels):
    return [
        AnnotationRecord(instance_id=instance_id, annotator_id=f"ann{i}", label=label)
        for i, label in enumerate(labels)
    ]


class TestInstance:
    def test_requires_id(self):
        with pytest.raises(DataError):
            Instance(id="", source="s", headline="h")

    def test_rejects_unknown_split(self):
        with pytest.raises(DataError):
            Instance(id="a", source="s", headline="h", split="eval")

    def test_pseudo_needs_generator(self):
        with pytest.raises(DataError):
            Instance(id="a", source="s", headline="h", origin="pseudo")
        Instance(id="a", source="s", headline="h", origin="pseudo", metadata={"generator": "g"})


class TestReadWrite:
    def test_one_line_jsonl(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text('{"id":"a1","source":"s","headline":"h","split":"train"}\n', encoding="utf-8")
        (inst,) = read_instances(path)
        assert (inst.id, inst.source, inst.headline, inst.split) == ("a1", "s", "h", "train")
        assert inst.origin == "natural" and inst.metadata == {}

    def test_tsv_line_with_split_flag(self, tmp_path):
        path = tmp_path / "d.tsv"
        path.write_text("a1\ts\th\n", encoding="utf-8")
        (inst,) = read_instances(path, "tsv", split="train")
        assert (inst.id, inst.source, inst.headline, inst.split) == ("a1", "s", "h", "train")

    def test_duplicate_id_names_both_lines(self, tmp_path):
        path = tmp_path / "d.jsonl"
        rows = [{"id": "x", "source": "s", "headline": "h"} for _ in range(2)]
        filler = [{"id": f"f{i}", "source": "s", "headline": "h"} for i in range(5)]
        order = [filler[0], filler[1], rows[0], filler[2], filler[3], filler[4], rows[1]]
        path.write_text("".join(json.dumps(r) + "\n" for r in order), encoding="utf-8")
        with pytest.raises(DataError, match=r"lines 3 and 7"):
            read_instances(path)

    def test_malformed_lines_collected(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text('{"id":"a","source":"s","headline":"h"}\nnot json\n{"id":"b"}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError) as exc:
            read_instances(path)
        assert [lineno for lineno, _ in exc.value.errors] == [2, 3]

    def test_lenient_skips_malformed(self, tmp_path):
        path = tmp_path / "d.jsonl"
        path.write_text('{"id":"a","source":"s","headline":"h"}\nnot json\n', encoding="utf-8")
        instances = read_instances(path, lenient=True)
        assert [i.id for i in instances] == ["a"]

    def test_jsonl_fixed_key_order(self, tmp_path):
        path = tmp_path / "d.jsonl"
        write_instances([Instance(id="a", source="s", headline="h", metadata={"b": "2", "a": "1"})], path)
        line = path.read_text(encoding="utf-8").strip()
        pairs = json.JSONDecoder(object_pairs_hook=list).decode(line)
        assert [k for k, _ in pairs] == ["id", "source", "headline", "split", "origin", "metadata"]
        assert "\n" not in line[:-1] and ": " not in line  # compact, single line

    def test_write_to_unwritable_path(self, tmp_path):
        with pytest.raises(DataError):
            write_instances([Instance(id="a", source="s", headline="h")], tmp_path / "nodir" / "d.jsonl")

    @settings(max_examples=50, deadline=None)
    @given(st.lists(instance_st, max_size=20, unique_by=lambda i: i.id))
    def test_jsonl_roundtrip(self, dataset):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "d.jsonl"
            write_instances(dataset, path)
            assert read_instances(path) == dataset

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.builds(Instance, id=id_st, source=text_st, headline=text_st),
            max_size=20,
            unique_by=lambda i: i.id,
        )
    )
    def test_tsv_roundtrip(self, dataset):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "d.tsv"
            write_instances(dataset, path, "tsv")
            assert read_instances(path, "tsv", split="train") == dataset

    def test_tsv_escapes_tabs_and_newlines(self, tmp_path):
        inst = Instance(id="a\tb", source="line1\nline2", headline="back\\slash\rcr")
        path = tmp_path / "d.tsv"
        write_instances([inst], path, "tsv")
        raw = path.read_text(encoding="utf-8")
        assert raw.count("\n") == 1  # exactly the record terminator
        assert "\\t" in raw and "\\n" in raw
        assert read_instances(path, "tsv")[0] == inst


class TestAnnotations:
    def test_roundtrip_and_header_skip(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        records = votes("i1", ["entail", "non_entail", "incomprehensible"])
        write_annotations(records, path)
        content = path.read_text(encoding="utf-8")
        path.write_text('{"header":{"annotator_id":"ann0"}}\n' + content, encoding="utf-8")
        assert read_annotations(path) == records

    def test_duplicate_annotator_rejected(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        rec = {"instance_id": "i", "annotator_id": "a", "label": "entail"}
        path.write_text(json.dumps(rec) + "\n" + json.dumps(rec) + "\n", encoding="utf-8")
        with pytest.raises(DataError, match="duplicate annotation"):
            read_annotations(path)

    def test_bad_label_reported_with_line(self, tmp_path):
        path = tmp_path / "ann.jsonl"
        path.write_text('{"instance_id":"i","annotator_id":"a","label":"maybe"}\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError):
            read_annotations(path)


class TestMajorityRule:
    def test_parse(self):
        rule = MajorityRule.parse("4of5")
        assert (rule.min_agree, rule.panel_size) == (4, 5)

    def test_reject_nonmajority(self):
        with pytest.raises(DataError):
            MajorityRule(min_agree=1, panel_size=3)

    def test_reject_garbage(self):
        with pytest.raises(DataError):
            MajorityRule.parse("best-of-3")


class TestAggregateVotes:
    def test_two_of_three_entail(self):
        (got,) = aggregate_votes(votes("i", ["entail", "entail", "non_entail"]), MajorityRule(2, 3))
        assert (got.label, got.votes_for, got.votes_total) == ("entail", 2, 3)

    def test_four_of_five_split_undecided(self):
        (got,) = aggregate_votes(
            votes("i", ["entail", "entail", "entail", "non_entail", "non_entail"]),
            MajorityRule(4, 5),
        )
        assert (got.label, got.votes_for, got.votes_total) == ("undecided", 3, 5)

    def test_all_incomprehensible_undecided(self):
        (got,) = aggregate_votes(votes("i", ["incomprehensible"] * 3), MajorityRule(2, 3))
        assert (got.label, got.votes_for, got.votes_total) == ("undecided", 0, 3)

    def test_partial_panel_allowed(self):
        (got,) = aggregate_votes(votes("i", ["entail", "entail"]), MajorityRule(2, 3))
        assert got.label == "entail" and got.votes_total == 2

    def test_oversize_panel_rejected(self):
        with pytest.raises(DataError, match="panel size"):
            aggregate_votes(votes("i", ["entail"] * 4), MajorityRule(2, 3))

    def test_duplicate_annotator_rejected(self):
        records = [
            AnnotationRecord(instance_id="i", annotator_id="a", label="entail"),
            AnnotationRecord(instance_id="i", annotator_id="a", label="non_entail"),
        ]
        with pytest.raises(DataError, match="duplicate annotator"):
            aggregate_votes(records, MajorityRule(2, 3))

    @given(st.permutations(list(range(6))))
    def test_permutation_invariant(self, order):
        records = votes("x", ["entail", "non_entail", "entail"]) + votes(
            "y", ["non_entail", "non_entail", "incomprehensible"]
        )
        shuffled = [records[i] for i in order]
        assert aggregate_votes(shuffled, MajorityRule(2, 3)) == aggregate_votes(
            records, MajorityRule(2, 3)
        )

    def test_entail_ratio_modes(self):
        records = (
            votes("a", ["entail", "entail", "entail"])
            + votes("b", ["non_entail", "non_entail", "entail"])
            + votes("c", ["incomprehensible", "incomprehensible", "incomprehensible"])
        )
        labels = aggregate_votes(records, MajorityRule(2, 3))
        assert entail_ratio(labels) == pytest.approx(1 / 3)
        assert entail_ratio(labels, exclude_undecided=True) == pytest.approx(1 / 2)


class TestCorpusStats:
    def test_words_per_headline(self):
        data = [
            Instance(id="a", source="x y.", headline="one two three"),
            Instance(id="b", source="x.", headline="one two three four five"),
        ]
        stats = corpus_stats(data, TokenizerConfig(mode="whitespace"))
        assert stats.words_per_headline == 4.0
        assert stats.n_headline_words == 8

    def test_sentences_per_doc(self):
        data = [Instance(id="a", source="First thing happened. Then another!", headline="h")]
        stats = corpus_stats(data)
        assert stats.sents_per_doc == 2.0

    def test_empty_dataset_rejected(self):
        with pytest.raises(DataError):
            corpus_stats([])


class TestSentenceSplitter:
    def test_abbreviation_guard(self):
        got = SentenceSplitter().split("mr. smith arrived. he sat down.")
        assert got == ["mr. smith arrived.", "he sat down."]

    def test_cjk_terminator(self):
        got = SentenceSplitter().split("日経平均が上昇した。円は下落した。")
        assert len(got) == 2

    def test_decimal_not_split(self):
        got = SentenceSplitter().split("shares rose 3.4 percent. volume was thin.")
        assert len(got) == 2

    def test_trailing_text_counts(self):
        assert SentenceSplitter().split("no terminator here") == ["no terminator here"]
