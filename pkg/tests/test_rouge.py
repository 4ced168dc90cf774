import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lcs_brute_force
from otextsum.rouge import RougeScore, lcs_length, ngrams, rouge_l, rouge_n, rouge_scores
from rouge_fixture import PAIRS


def close(score, expected):
    return all(abs(a - float(b)) <= 1e-12 for a, b in zip((score.precision, score.recall, score.f1), expected))


def test_spec_examples():
    s = rouge_n(["the", "cat", "sat"], ["the", "cat"], 1)
    assert (s.precision, s.recall, s.f1) == pytest.approx((2 / 3, 1, 0.8), abs=1e-15)
    assert rouge_n("a b c", "a b c", 2) == RougeScore(1.0, 1.0, 1.0)
    assert rouge_n("a b", "c d", 1) == RougeScore(0.0, 0.0, 0.0)
    s = rouge_l(["a", "b", "c"], ["a", "x", "c"])
    assert (s.precision, s.recall) == pytest.approx((2 / 3, 2 / 3), abs=1e-15)
    assert rouge_l("a b c", "a b c") == RougeScore(1.0, 1.0, 1.0)
    assert lcs_length("abcdef", "fedcba") == 1


@pytest.mark.parametrize("cand, ref, r1, r2, rl", PAIRS)
def test_fixture(cand, ref, r1, r2, rl):
    assert close(rouge_n(cand, ref, 1), r1)
    assert close(rouge_n(cand, ref, 2), r2)
    assert close(rouge_l(cand, ref), rl)


def test_text_is_lowercased_without_stopword_removal():
    assert rouge_n("The CAT, the cat!", "the cat the cat", 2).f1 == 1.0


def test_rouge_scores_keys_and_errors():
    assert set(rouge_scores("a", "a")) == {"rouge1", "rouge2", "rougeL"}
    with pytest.raises(ValueError):
        rouge_n("a", "a", 0)
    assert rouge_n("a", "a b", 2) == RougeScore(0.0, 0.0, 0.0)
    assert ngrams(["a", "b", "a", "b"], 2)[("a", "b")] == 2


def test_lcs_matches_brute_force_exhaustively_on_small_alphabet():
    words = ["a", "b", "c"]
    seqs = [s for n in range(5) for s in itertools.product(words, repeat=n)]
    for x in seqs:
        for y in seqs[::3]:
            assert lcs_length(x, y) == lcs_brute_force(x, y)


tokens = st.lists(st.sampled_from("abcde"), max_size=6)


@settings(max_examples=300, deadline=None)
@given(tokens, tokens)
def test_properties(x, y):
    assert lcs_length(x, y) == lcs_brute_force(x, y)
    for fn in (lambda a, b: rouge_n(a, b, 1), lambda a, b: rouge_n(a, b, 2), rouge_l):
        s, t = fn(x, y), fn(y, x)
        assert (s.precision, s.recall) == (t.recall, t.precision)
        assert s.f1 == pytest.approx(t.f1, abs=1e-15)
        for v in (s.precision, s.recall, s.f1):
            assert 0.0 <= v <= 1.0
        if s.precision + s.recall > 0:
            assert s.f1 == pytest.approx(2 * s.precision * s.recall / (s.precision + s.recall))
        else:
            assert s.f1 == 0.0
