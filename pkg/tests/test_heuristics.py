import pytest

from truthline.corpus import Instance
from truthline.errors import DataError
from truthline.heuristics import (
    ALL_CHECKS,
    BYLINE_MARKS,
    NO_CONTENT_OVERLAP,
    QUESTION_OR_COLON,
    NoiseFilterConfig,
    apply_noise_filters,
    check_byline_marks,
    check_content_overlap,
    check_punctuation,
    default_byline_patterns,
    load_marker_patterns,
)
from truthline.textkit import StopwordList, TokenizerConfig


@pytest.fixture
def config(small_stopwords):
    return NoiseFilterConfig(
        stopwords=small_stopwords,
        tokenizer=TokenizerConfig(mode="unicode_word", lowercase=True),
    )


class TestContentOverlap:
    def test_shared_content_word(self, small_stopwords):
        assert check_content_overlap(
            ["tokyo", "stocks", "rose"], ["stocks", "rise"], small_stopwords
        )

    def test_only_stopword_shared(self, small_stopwords):
        assert not check_content_overlap(
            ["the", "markets", "fell"], ["the", "winner"], small_stopwords
        )

    def test_empty_headline(self, small_stopwords):
        assert not check_content_overlap(["markets"], [], small_stopwords)

    def test_case_insensitive_match(self):
        assert check_content_overlap(["Stocks"], ["stocks"], StopwordList())


class TestBylineMarks:
    def test_by_prefix_rejected(self):
        assert not check_byline_marks("by john smith in london")

    def test_clean_headline_passes(self):
        assert check_byline_marks("home sales rise")

    def test_bracket_tag_rejected(self):
        assert not check_byline_marks("(reuters) markets fall")

    def test_leading_dash_run_rejected(self):
        assert not check_byline_marks("--- markets fall")

    def test_update_tag_rejected(self):
        assert not check_byline_marks("UPDATE 1 markets fall")

    def test_word_containing_by_passes(self):
        assert check_byline_marks("bystanders watch parade")

    def test_empty_pattern_list_rejected(self):
        with pytest.raises(DataError):
            check_byline_marks("anything", ())

    def test_pattern_file(self, tmp_path):
        path = tmp_path / "markers.txt"
        path.write_text("# custom\n^exclusive:\n", encoding="utf-8")
        patterns = load_marker_patterns(path)
        assert not check_byline_marks("exclusive: big story", patterns)
        assert check_byline_marks("big story", patterns)

    def test_default_patterns_compile(self):
        assert len(default_byline_patterns()) >= 4


class TestPunctuation:
    def test_colon_rejected(self):
        assert not check_punctuation("football : italian serie a table")

    def test_question_mark_rejected(self):
        assert not check_punctuation("will markets fall ?")

    def test_clean_passes(self):
        assert check_punctuation("markets fall")

    def test_fullwidth_variants_rejected(self):
        assert not check_punctuation("株価は？")
        assert not check_punctuation("速報：株価上昇")


class TestApplyNoiseFilters:
    def test_clean_instance(self, config):
        inst = Instance(id="a", source="tokyo stocks rose tuesday", headline="tokyo stocks rise")
        verdict = apply_noise_filters(inst, config)
        assert verdict.keep and not verdict.violations

    def test_colon_headline(self, config):
        inst = Instance(id="a", source="lazio and roma play", headline="football : lazio roma")
        verdict = apply_noise_filters(inst, config)
        assert not verdict.keep and verdict.violations == {QUESTION_OR_COLON}

    def test_violations_accumulate(self, config):
        inst = Instance(id="a", source="something else entirely", headline="football : serie a")
        verdict = apply_noise_filters(inst, config)
        assert verdict.violations == {QUESTION_OR_COLON, NO_CONTENT_OVERLAP}

    def test_disabling_checks_is_monotone(self, config):
        inst = Instance(id="a", source="unrelated text", headline="by john smith : oddity ?")
        full = apply_noise_filters(inst, config)
        assert full.violations == set(ALL_CHECKS)
        for dropped in ALL_CHECKS:
            cfg = NoiseFilterConfig(
                stopwords=config.stopwords,
                tokenizer=config.tokenizer,
                enabled=frozenset(set(ALL_CHECKS) - {dropped}),
            )
            partial = apply_noise_filters(inst, cfg)
            assert partial.violations == full.violations - {dropped}

    def test_unknown_check_rejected(self, config):
        with pytest.raises(DataError):
            NoiseFilterConfig(enabled=frozenset({"no_clickbait"}))
