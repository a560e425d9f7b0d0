import numpy as np
import pytest

from inertia_eval import DataError
from inertia_eval.bleu import BleuConfig, harmonic_mean
from inertia_eval.corpus import SegmentScores
from inertia_eval.inertia import (
    consistency,
    consistency_multi,
    exact_match_rate,
    robustness,
    robustness_bleu,
    smoothness,
    stability,
    symmetrize,
)
from oracles import bleu_oracle

CLEAN = ["the cat sat on the mat today", "a dog barked at the mailman", "it was raining all day long"]
NOISY = ["the cat sat on the rug today", "a dog barked at the mailman", "it was raining all day long"]
DISJOINT = ["one two three four five", "six seven eight nine ten", "alpha beta gamma delta eps"]


def oracle_consistency(a, b):
    x, y = bleu_oracle(a, b), bleu_oracle(b, a)
    return 0.0 if x + y == 0 else 2 * x * y / (x + y)


def test_consistency_identity():
    assert consistency(CLEAN, CLEAN) == 100.0


def test_consistency_one_changed_word_matches_oracle():
    assert consistency(NOISY, CLEAN) == pytest.approx(oracle_consistency(NOISY, CLEAN), abs=1e-4)
    assert 0 < consistency(NOISY, CLEAN) < 100


def test_consistency_disjoint_matches_oracle():
    value = consistency(DISJOINT, CLEAN)
    assert value == pytest.approx(oracle_consistency(DISJOINT, CLEAN), abs=1e-4)
    assert 0 < value < 5


def test_consistency_symmetric_and_mismatch():
    assert consistency(NOISY, CLEAN) == consistency(CLEAN, NOISY)
    with pytest.raises(DataError):
        consistency(NOISY, CLEAN[:2])


def test_consistency_multi():
    assert consistency_multi(NOISY, [NOISY]) == 100.0
    c1, c2 = consistency(NOISY, CLEAN), consistency(NOISY, DISJOINT)
    assert consistency_multi(NOISY, [CLEAN, DISJOINT]) == pytest.approx((c1 + c2) / 2)
    with pytest.raises(ValueError):
        consistency_multi(NOISY, [])
    with pytest.raises(DataError):
        consistency_multi(NOISY, [CLEAN, CLEAN[:1]])


def test_consistency_multi_four_variants():
    variants = [CLEAN, NOISY, DISJOINT, [line.upper() for line in CLEAN]]
    expected = sum(oracle_consistency(NOISY, v) for v in variants) / 4
    assert consistency_multi(NOISY, variants) == pytest.approx(expected, abs=1e-4)


def test_robustness_scores():
    clean = [0.5, 0.6, 0.7, 0.2, 0.9]
    assert robustness(clean, clean) == 0.0
    assert robustness([c - 0.1 for c in clean], clean) == pytest.approx(-0.1)
    noisy = [0.4, 0.6, 0.1, 0.3, 0.5]
    # (1.9 - 2.9) / 5
    assert robustness(noisy, clean) == pytest.approx(-0.2)


def test_robustness_scores_validation():
    with pytest.raises(DataError):
        robustness([0.1, 0.2], [0.1])
    with pytest.raises(DataError):
        robustness(SegmentScores(np.ones((3, 2))), [1.0, 1.0, 1.0])


def test_robustness_bleu():
    refs = CLEAN
    assert robustness_bleu(CLEAN, CLEAN, refs) == 0.0
    value = robustness_bleu(NOISY, CLEAN, refs)
    assert value == pytest.approx(bleu_oracle(NOISY, refs) - 100.0, abs=1e-4)
    assert value < 0
    assert robustness_bleu(CLEAN, NOISY, refs) == -value


def test_smoothness_bundle():
    result = smoothness(NOISY, CLEAN, CLEAN)
    assert result.consistency == consistency(NOISY, CLEAN)
    assert result.robustness == robustness_bleu(NOISY, CLEAN, CLEAN)


def test_stability_identity_and_exact_match():
    result = stability(CLEAN, CLEAN)
    assert result.stability == 100.0 and result.exact_match_rate == 1.0
    assert stability(CLEAN, NOISY).exact_match_rate == pytest.approx(2 / 3)


def test_stability_disjoint():
    result = stability(CLEAN, DISJOINT)
    assert result.exact_match_rate == 0.0
    assert result.stability == pytest.approx(oracle_consistency(CLEAN, DISJOINT), abs=1e-4)


def test_exact_match_trims_trailing_whitespace_only():
    assert exact_match_rate(["a b  ", " a", "x"], ["a b", "a", "y"]) == pytest.approx(1 / 3)


def test_stability_uses_configured_tokenizer():
    a, b = ["Hello, world! It is fine."], ["Hello , world ! It is fine ."]
    assert stability(a, b).stability == 100.0
    assert stability(a, b, BleuConfig(tokenizer="whitespace")).stability < 100.0


def test_symmetrize():
    assert symmetrize(10, 10) == 10
    assert symmetrize(0, 8) == 4


def test_harmonic_composition():
    a, b = NOISY, CLEAN
    from inertia_eval.bleu import corpus_bleu

    assert consistency(a, b) == harmonic_mean(corpus_bleu(a, b).score, corpus_bleu(b, a).score)
