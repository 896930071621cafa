import math
import random

import pytest

from polyseg.corpus import CANONICAL, SURFACE, SegmentationDataset, SegmentedWord
from polyseg.errors import AlignmentError, UnsupportedModeError
from oracles import emma_oracle_matching, random_emma_instance
from polyseg.metrics import (
    BLEU_SIGNATURE,
    CHRF_SIGNATURE,
    SegScore,
    bleu,
    boundary_f1,
    chrf,
    emma_f1,
    tokenize_13a,
)


def seg_dataset(pairs, mode=SURFACE):
    return SegmentationDataset(
        tuple(SegmentedWord(surface, tuple(morphs), mode=mode) for surface, morphs in pairs),
        mode=mode,
    )


class TestBoundaryF1:
    def test_identity(self):
        ds = seg_dataset([("abc", ("ab", "c")), ("de", ("d", "e"))])
        score = boundary_f1(ds, ds)
        assert score == SegScore(1.0, 1.0, 1.0, 1.0)

    def test_disjoint_boundaries(self):
        gold = seg_dataset([("abc", ("ab", "c"))])
        pred = seg_dataset([("abc", ("a", "bc"))])
        score = boundary_f1(pred, gold)
        assert score == SegScore(0.0, 0.0, 0.0, 0.0)

    def test_partial_overlap_hand_counted(self):
        gold = seg_dataset([("abc", ("a", "b", "c"))])  # boundaries {1, 2}
        pred = seg_dataset([("abc", ("a", "bc"))])  # boundaries {1}
        score = boundary_f1(pred, gold)
        assert score.precision == 1.0
        assert score.recall == 0.5
        assert score.f1 == pytest.approx(2 / 3)

    def test_surface_mismatch_reports_index(self):
        gold = seg_dataset([("abc", ("ab", "c")), ("xy", ("x", "y"))])
        pred = seg_dataset([("abc", ("ab", "c")), ("xz", ("x", "z"))])
        with pytest.raises(AlignmentError) as exc:
            boundary_f1(pred, gold)
        assert "index 1" in str(exc.value)

    def test_canonical_mode_rejected(self):
        surf = seg_dataset([("ab", ("a", "b"))])
        canon = seg_dataset([("ab", ("aX", "b"))], mode=CANONICAL)
        with pytest.raises(UnsupportedModeError):
            boundary_f1(surf, canon)


class TestEmmaF1:
    def test_identity_saturates(self):
        ds = seg_dataset([("kawi", ("ka", "wi")), ("kasu", ("ka", "su"))])
        score = emma_f1(ds, ds)
        assert score.f1 == 1.0 and score.accuracy == 1.0

    def test_matching_equals_brute_force_on_random_instances(self):
        rng = random.Random(8)
        for _ in range(100):
            surfaces, preds, golds = random_emma_instance(rng)
            pred = seg_dataset(list(zip(surfaces, preds)))
            gold = seg_dataset(list(zip(surfaces, golds)))
            score = emma_f1(pred, gold)
            n_pred = sum(len(m) for m in preds)
            matched = score.precision * n_pred
            assert matched == pytest.approx(emma_oracle_matching(preds, golds), abs=1e-9)

    def test_collapsed_prediction_bounds_recall(self):
        gold = seg_dataset([("abcd", ("ab", "cd")), ("efgh", ("ef", "gh"))])
        pred = seg_dataset([("abcd", ("abcd",)), ("efgh", ("efgh",))])
        score = emma_f1(pred, gold)
        assert score.recall <= 0.5

    def test_canonical_gold_supported(self):
        pred = seg_dataset([("kawi", ("ka", "wi"))])
        gold = seg_dataset([("kawi", ("kaw", "i2"))], mode=CANONICAL)
        score = emma_f1(pred, gold)
        assert 0.0 <= score.f1 <= 1.0


class Test13aTokenizer:
    # goldens pinned against the mteval-v13a rule set, byte for byte
    GOLDENS = {
        "Hello, world!": "Hello , world !",
        "&quot;Nice&quot; &amp; good.": '" Nice " & good .',
        "2.5 cats, 3,000 dogs 7-9": "2.5 cats , 3,000 dogs 7 - 9",
        "a-b c- d don't": "a-b c- d don't",
        "(x) [y] {z} @home #tag 50% a/b": "( x ) [ y ] { z } @ home # tag 50 % a / b",
        "<skipped> tag here": "tag here",
        "ends with digits 2021.": "ends with digits 2021 .",
        "semi;colon:and?question!bang": "semi ; colon : and ? question ! bang",
        "  spaced   out  ": "spaced out",
        "mixed 3.14159, value=42; ok?": "mixed 3.14159 , value = 42 ; ok ?",
    }

    def test_goldens_byte_exact(self):
        for raw, expected in self.GOLDENS.items():
            assert tokenize_13a(raw) == expected


class TestBleu:
    def test_identity_is_exactly_100(self):
        lines = ["a b c d e", "the cat sat on the mat"]
        assert bleu(lines, list(lines)).score == 100.0

    def test_hand_counted_fixture(self):
        # p1=3/4 p2=2/3 p3=1/2 p4=0 - smoothed to 1/2; BP=1
        report = bleu(["a b c d"], ["a b c c"])
        hand = 100 * math.exp(
            (math.log(3 / 4) + math.log(2 / 3) + math.log(1 / 2) + math.log(1 / 2)) / 4
        )
        assert report.score == pytest.approx(hand, abs=1e-9)
        assert round(report.score, 4) == 59.4604

    def test_empty_hypothesis_line_defined(self):
        report = bleu(["", "a b c d"], ["a b", "a b c d"])
        assert 0.0 <= report.score <= 100.0

    def test_signature(self):
        report = bleu(["a"], ["a"])
        assert report.signature == BLEU_SIGNATURE == "BLEU+case.mixed+numrefs.1+smooth.exp+tok.13a"

    def test_case_preserved(self):
        assert bleu(["A b C d"], ["a b c d"]).score < 100.0

    def test_alignment_error(self):
        with pytest.raises(AlignmentError):
            bleu(["a"], ["a", "b"])

    def test_identity_stable_under_concatenation(self):
        lines = ["a b c d", "e f g h i"]
        once = bleu(lines, list(lines)).score
        twice = bleu(lines * 2, lines * 2).score
        assert once == twice == 100.0

    def test_brevity_penalty(self):
        # hyp 4 tokens vs ref 5: BP = exp(1 - 5/4)
        short = bleu(["a b c d"], ["a b c d e"])
        assert short.score == pytest.approx(
            100 * math.exp(1 - 5 / 4) * math.exp(
                (math.log(4 / 4) + math.log(3 / 3) + math.log(2 / 2) + math.log(1 / 1)) / 4
            ),
            abs=1e-9,
        )


class TestChrf:
    def test_identity_is_exactly_100(self):
        lines = ["abc def", "ghij"]
        assert chrf(lines, list(lines)).score == 100.0

    def test_hand_counted_fixture(self):
        # orders 1..3 present: precisions 2/3, 1/2, 0; recalls equal; F2 = P
        report = chrf(["abc"], ["abd"])
        assert report.score == pytest.approx(100 * (7 / 18), abs=1e-9)
        assert round(report.score, 4) == 38.8889

    def test_whitespace_invisible(self):
        spaced = chrf(["a b c d e f"], ["ab cdef"])
        stripped = chrf(["abcdef"], ["abcdef"])
        assert spaced.score == stripped.score == 100.0

    def test_signature(self):
        report = chrf(["a"], ["a"])
        assert report.signature == CHRF_SIGNATURE == "chrF2+numchars.6+space.false"

    def test_scores_within_range_and_per_sentence(self):
        report = chrf(["abc", "xyz"], ["abd", "xyw"])
        assert 0.0 <= report.score <= 100.0
        assert len(report.sentence_scores) == 2
        for s in report.sentence_scores:
            assert 0.0 <= s <= 100.0
