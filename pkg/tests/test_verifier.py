"""Response parsing and reward scoring: extraction, strict format, algebra."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spatial_forge.core import (
    FlipAnswer,
    OptionAnswer,
    QASample,
    SeedSpec,
    TaskKind,
)
from spatial_forge.errors import Unparseable
from spatial_forge.verifier import (
    ACC_WEIGHT,
    FMT_WEIGHT,
    canonicalize,
    parse_response,
    score,
    score_text,
)

WELL_FORMED = "<think>some reasoning</think> The answer is \\boxed{%s}."


class TestParseResponse:
    def test_extracts_think_and_boxed(self):
        p = parse_response("<think>abc</think> \\boxed{3-0-2-1}")
        assert p.think_block == "abc"
        assert p.boxed_answer == "3-0-2-1"
        assert p.strict_format

    def test_last_boxed_wins(self):
        p = parse_response("\\boxed{A} then \\boxed{B}")
        assert p.boxed_answer == "B"

    def test_nested_braces_balanced(self):
        p = parse_response("\\boxed{\\text{A}}")
        assert p.boxed_answer == "\\text{A}"

    def test_unterminated_box_ignored(self):
        p = parse_response("\\boxed{A} junk \\boxed{unclosed")
        assert p.boxed_answer == "A"
        p = parse_response("\\boxed{never closed")
        assert p.boxed_answer is None

    def test_no_markup(self):
        p = parse_response("just words")
        assert p.think_block is None
        assert p.boxed_answer is None
        assert not p.strict_format

    @pytest.mark.parametrize("text", [
        "\\boxed{A}",                                        # no think block
        "<think>a</think><think>b</think> \\boxed{A}",       # two opens
        "<think>a</think> b</think> \\boxed{A}",             # two closes
        "<think>a \\boxed{A}",                               # close missing
        "</think>a<think> \\boxed{A}",                       # close before open
        "<think>\\boxed{A}</think>",                         # boxed inside think
        "<think>a</think> \\boxed{A} \\boxed{B}",            # two boxed
        "<think>a</think> no box",                           # zero boxed
    ])
    def test_strict_format_violations(self, text):
        assert not parse_response(text).strict_format

    def test_strict_format_positive(self):
        assert parse_response(WELL_FORMED % "A").strict_format


class TestCanonicalize:
    def test_letters_case_insensitive(self):
        for task in (TaskKind.INPAINT, TaskKind.REL_POSITION):
            assert canonicalize(task, "b") == "B"
            assert canonicalize(task, " C ") == "C"

    @pytest.mark.parametrize("raw", ["E", "AB", "1", ""])
    def test_letters_rejects(self, raw):
        with pytest.raises(Unparseable):
            canonicalize(TaskKind.INPAINT, raw)

    def test_shuffle_orderings(self):
        assert canonicalize(TaskKind.SHUFFLE, "3-0-2-1") == "3-0-2-1"
        assert canonicalize(TaskKind.SHUFFLE, "1-0-2") == "1-0-2"
        assert canonicalize(TaskKind.SHUFFLE, " 2-0-1 ") == "2-0-1"

    @pytest.mark.parametrize("raw", [
        "0-1", "0-1-2-3-4", "0-0-1-2", "1-2-3-4", "a-b-c", "0,1,2,3", "3 0 2 1",
    ])
    def test_shuffle_rejects(self, raw):
        with pytest.raises(Unparseable):
            canonicalize(TaskKind.SHUFFLE, raw)

    def test_flip_pairs(self):
        assert canonicalize(TaskKind.FLIP, "2-1") == "2-1"
        assert canonicalize(TaskKind.FLIP, "0-0") == "0-0"

    @pytest.mark.parametrize("raw", ["4-0", "0-2", "2", "2-1-0", "a-1"])
    def test_flip_rejects(self, raw):
        with pytest.raises(Unparseable):
            canonicalize(TaskKind.FLIP, raw)

    def test_depth_orderings(self):
        assert canonicalize(TaskKind.DEPTH_ORDER, "3-1-2") == "3-1-2"

    @pytest.mark.parametrize("raw", ["0-1-2", "1-2", "1-1-2", "1-2-3-3", "4-5-6"])
    def test_depth_rejects(self, raw):
        with pytest.raises(Unparseable):
            canonicalize(TaskKind.DEPTH_ORDER, raw)


class TestScoreText:
    def test_four_exact_reward_values(self):
        gt = "2-1"
        assert score_text(TaskKind.FLIP, gt, WELL_FORMED % "2-1").r == 1.0
        assert score_text(TaskKind.FLIP, gt, WELL_FORMED % "3-1").r == 0.1
        assert score_text(TaskKind.FLIP, gt, "\\boxed{2-1}").r == 0.9
        assert score_text(TaskKind.FLIP, gt, "\\boxed{3-1}").r == 0.0
        assert score_text(TaskKind.FLIP, gt, "no answer at all").r == 0.0

    def test_formula_holds_exactly(self):
        gt = "A"
        for text in (WELL_FORMED % "A", WELL_FORMED % "B", "\\boxed{A}", "\\boxed{B}", ""):
            b = score_text(TaskKind.INPAINT, gt, text)
            assert b.r == ACC_WEIGHT * b.r_acc + FMT_WEIGHT * b.r_fmt
            assert b.r_acc in (0.0, 1.0) and b.r_fmt in (0.0, 1.0)

    def test_weights_sum_to_one_exactly(self):
        assert ACC_WEIGHT + FMT_WEIGHT == 1.0

    def test_lenient_extraction_scores_accuracy(self):
        # two boxed answers break strict format, yet the last one still counts
        b = score_text(TaskKind.FLIP, "2-1", "<think>a</think>\\boxed{0-0}\\boxed{2-1}")
        assert b.r_acc == 1.0 and b.r_fmt == 0.0 and b.r == 0.9

    def test_case_insensitive_letter_accuracy(self):
        assert score_text(TaskKind.REL_POSITION, "C", WELL_FORMED % "c").r == 1.0

    def test_unparseable_boxed_scores_zero_accuracy(self):
        b = score_text(TaskKind.SHUFFLE, "3-0-2-1", WELL_FORMED % "elephants")
        assert b.r_acc == 0.0 and b.r_fmt == 1.0 and b.r == 0.1

    def test_whitespace_inside_box_tolerated(self):
        assert score_text(TaskKind.SHUFFLE, "3-0-2-1", WELL_FORMED % " 3-0-2-1 ").r == 1.0

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=200))
    def test_never_raises_and_stays_in_range(self, text):
        for task, gt in ((TaskKind.SHUFFLE, "3-0-2-1"), (TaskKind.FLIP, "2-1"),
                         (TaskKind.INPAINT, "A"), (TaskKind.DEPTH_ORDER, "1-3-2"),
                         (TaskKind.REL_POSITION, "D")):
            b = score_text(task, gt, text)
            assert b.r in (0.0, 0.1, 0.9, 1.0)
            assert b.r == ACC_WEIGHT * b.r_acc + FMT_WEIGHT * b.r_fmt

    def test_non_string_response_scores_zero(self):
        assert score_text(TaskKind.FLIP, "2-1", None).r == 0.0


class TestScoreSample:
    def _sample(self):
        return QASample(
            id="f" * 16, task=TaskKind.FLIP, question="q",
            images=("images/a_0.png",),
            answer=FlipAnswer(label=2, direction=1),
            seed=SeedSpec(0, 0), source_image="s.png",
        )

    def test_wrapper_equals_direct_call(self):
        s = self._sample()
        for text in (WELL_FORMED % "2-1", WELL_FORMED % "0-0", "\\boxed{2-1}", "x"):
            assert score(s, text) == score_text(TaskKind.FLIP, "2-1", text)

    def test_gt_round_trip_all_answer_kinds(self):
        cases = [
            (TaskKind.REL_POSITION, OptionAnswer(letter="D"), ("images/x.png",)),
            (TaskKind.FLIP, FlipAnswer(label=0, direction=1), ("images/x.png",)),
        ]
        for task, answer, images in cases:
            s = QASample(id="a" * 16, task=task, question="q", images=images,
                         answer=answer, seed=SeedSpec(0, 1), source_image="s.png")
            assert score(s, WELL_FORMED % answer.canonical()).r == 1.0
