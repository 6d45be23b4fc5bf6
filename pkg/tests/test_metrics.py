from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wuglabels.errors import EmptySet, InsufficientData
from wuglabels.metrics import (
    RougeScore,
    eval_scores,
    krippendorff_alpha,
    lcs_length,
    rouge_l,
)


def exhaustive_lcs(a, b):
    """Oracle: enumerate every subsequence of a, test against b."""

    def is_subsequence(sub, seq):
        it = iter(seq)
        return all(tok in it for tok in sub)

    best = 0
    for r in range(len(a), 0, -1):
        for combo in itertools.combinations(a, r):
            if is_subsequence(combo, b):
                return r
    return best


class TestLcs:
    def test_identical(self):
        assert lcs_length(list("abcde"), list("abcde")) == 5

    def test_disjoint_alphabets(self):
        assert lcs_length(["a", "b"], ["x", "y", "z"]) == 0

    def test_hand_value(self):
        assert lcs_length(["a", "b", "c", "d"], ["b", "d", "a"]) == 2

    def test_empty_sides(self):
        assert lcs_length([], ["a"]) == 0
        assert lcs_length([], []) == 0

    def test_symmetric(self):
        rng = random.Random(1)
        for _ in range(50):
            a = [rng.choice("abc") for _ in range(rng.randrange(8))]
            b = [rng.choice("abc") for _ in range(rng.randrange(8))]
            assert lcs_length(a, b) == lcs_length(b, a)

    def test_monotone_under_shared_suffix(self):
        rng = random.Random(2)
        for _ in range(50):
            a = [rng.choice("abc") for _ in range(rng.randrange(6))]
            b = [rng.choice("abc") for _ in range(rng.randrange(6))]
            base = lcs_length(a, b)
            suffix = [rng.choice("abc")]
            assert lcs_length(a + suffix, b + suffix) == base + 1

    def test_against_exhaustive_oracle(self):
        rng = random.Random(3)
        for _ in range(300):
            a = [rng.choice("abc") for _ in range(rng.randrange(9))]
            b = [rng.choice("abc") for _ in range(rng.randrange(9))]
            assert lcs_length(a, b) == exhaustive_lcs(a, b)

    def test_works_on_string_tokens(self):
        assert lcs_length("the cat sat".split(), "the dog sat".split()) == 2


class TestRougeL:
    def test_identity(self):
        s = rouge_l("a b c", "a b c")
        assert s == RougeScore(1.0, 1.0, 1.0)

    def test_disjoint(self):
        assert rouge_l("a b", "x y").f == 0.0

    def test_hand_value(self):
        s = rouge_l("a b c d", "a c")
        assert s.recall == 0.5
        assert s.precision == 1.0
        assert s.f == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_empty_either_side(self):
        assert rouge_l("", "a").f == 0.0
        assert rouge_l("a", "").f == 0.0
        assert rouge_l("", "") == RougeScore(0.0, 0.0, 0.0)

    def test_lowercased(self):
        assert rouge_l("The Bank", "the bank").f == 1.0

    def test_swap_swaps_r_and_p(self):
        rng = random.Random(4)
        for _ in range(60):
            x = " ".join(rng.choice("abc") for _ in range(rng.randrange(1, 8)))
            y = " ".join(rng.choice("abc") for _ in range(rng.randrange(1, 8)))
            fwd = rouge_l(x, y)
            rev = rouge_l(y, x)
            assert fwd.recall == rev.precision
            assert fwd.precision == rev.recall
            assert fwd.f == pytest.approx(rev.f, abs=1e-12)

    def test_f_between_r_and_p(self):
        s = rouge_l("a b c d", "a c")
        assert min(s.recall, s.precision) <= s.f <= max(s.recall, s.precision)


def pairwise_alpha_oracle(units):
    """Independent nominal alpha via the pairwise-disagreement formulation."""
    units = [u for u in units if len(u) >= 2]
    n = sum(len(u) for u in units)
    d_o = 0.0
    for values in units:
        m = len(values)
        disagreements = sum(
            1 for a, b in itertools.permutations(values, 2) if a != b
        )
        d_o += disagreements / (m - 1)
    d_o /= n
    pooled = [v for u in units for v in u]
    d_e = sum(
        1 for a, b in itertools.permutations(pooled, 2) if a != b
    ) / (n * (n - 1))
    if d_e == 0:
        return 1.0
    return 1.0 - d_o / d_e


class TestKrippendorffAlpha:
    def test_perfect_agreement(self):
        data = [["A", "A", "A"], ["B", "B", "B"], ["A", "A", "A"]]
        assert krippendorff_alpha(data) == 1.0

    def test_hand_worked_two_annotators_four_units(self):
        # coincidence worksheet: o(A,B)+o(B,A)=4, n=8, n_A=n_B=4
        # D_o = 4/8 = 0.5; D_e = 32/56 = 4/7; alpha = 1 - 7/8 = 0.125
        data = [["A", "A"], ["A", "B"], ["B", "B"], ["B", "A"]]
        assert krippendorff_alpha(data) == pytest.approx(0.125, abs=1e-9)

    def test_matches_pairwise_oracle(self):
        rng = random.Random(5)
        for _ in range(50):
            units = [
                [rng.choice("ABC") for _ in range(rng.randint(2, 4))]
                for _ in range(rng.randint(2, 12))
            ]
            assert krippendorff_alpha(units) == pytest.approx(
                pairwise_alpha_oracle(units), abs=1e-12
            )

    def test_units_with_single_label_excluded(self):
        with_single = [["A", "A"], ["A", "B"], ["B", "B"], ["B", "A"], ["A"]]
        assert krippendorff_alpha(with_single) == pytest.approx(0.125, abs=1e-9)

    def test_missing_values_none(self):
        data = [["A", "A", None], ["A", "B", None], ["B", "B", None],
                ["B", "A", None]]
        assert krippendorff_alpha(data) == pytest.approx(0.125, abs=1e-9)

    def test_single_unit_insufficient(self):
        with pytest.raises(InsufficientData):
            krippendorff_alpha([["A", "B"]])

    def test_all_excluded_insufficient(self):
        with pytest.raises(InsufficientData):
            krippendorff_alpha([["A"], ["B"], []])

    def test_mapping_input(self):
        data = {
            "item1": {"ann1": "A", "ann2": "A"},
            "item2": {"ann1": "A", "ann2": "B"},
            "item3": {"ann1": "B", "ann2": "B"},
            "item4": {"ann1": "B", "ann2": "A"},
        }
        assert krippendorff_alpha(data) == pytest.approx(0.125, abs=1e-9)

    def test_random_uniform_labels_near_zero(self):
        rng = random.Random(2024)
        data = [[rng.choice("AB"), rng.choice("AB")] for _ in range(2000)]
        assert abs(krippendorff_alpha(data)) < 0.05

    def test_systematic_disagreement_negative(self):
        data = [["A", "B"], ["B", "A"], ["A", "B"], ["B", "A"]]
        assert krippendorff_alpha(data) < 0.0


class TestEvalScores:
    def test_one_of_each(self):
        s = eval_scores(["correct", "wrong", "both", "none"])
        assert s.accuracy == 25.0
        assert s.fits_both_pct == 25.0
        assert s.fits_none_pct == 25.0
        assert s.wrong_pct == 25.0
        assert s.unresolved_pct == 0.0

    def test_all_correct(self):
        s = eval_scores(["correct"] * 8)
        assert (s.accuracy, s.fits_both_pct, s.fits_none_pct) == (100.0, 0.0, 0.0)

    def test_defgen_english_row_shape(self):
        # 120 items split 83/13/14/10 lands on the published DefGen row
        outcomes = (["correct"] * 83 + ["both"] * 13 + ["none"] * 14
                    + ["wrong"] * 10)
        s = eval_scores(outcomes)
        assert round(s.accuracy, 2) == 69.17
        assert round(s.fits_both_pct, 2) == 10.83
        assert round(s.fits_none_pct, 2) == 11.67
        assert s.total == 120

    def test_unresolved_in_denominator(self):
        s = eval_scores(["correct", "unresolved"])
        assert s.accuracy == 50.0
        assert s.unresolved == 1
        assert s.unresolved_pct == 50.0

    def test_percentages_sum_to_100(self):
        rng = random.Random(6)
        for _ in range(50):
            outcomes = [
                rng.choice(["correct", "wrong", "both", "none", "unresolved"])
                for _ in range(rng.randint(1, 40))
            ]
            s = eval_scores(outcomes)
            total = (s.accuracy + s.fits_both_pct + s.fits_none_pct
                     + s.wrong_pct + s.unresolved_pct)
            assert total == pytest.approx(100.0, abs=1e-9)

    def test_empty(self):
        with pytest.raises(EmptySet):
            eval_scores([])

    def test_unknown_outcome(self):
        with pytest.raises(ValueError):
            eval_scores(["correct", "maybe"])


@given(st.lists(st.sampled_from("abc"), max_size=8),
       st.lists(st.sampled_from("abc"), max_size=8))
@settings(max_examples=200, deadline=None)
def test_lcs_hypothesis_vs_oracle(a, b):
    assert lcs_length(a, b) == exhaustive_lcs(a, b)
