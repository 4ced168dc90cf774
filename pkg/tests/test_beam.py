import math

import numpy as np
import pytest

from oracles import brute_force_best_subset
from otextsum import ot
from otextsum.beam import (
    BeamConfig,
    Candidate,
    beam_search,
    generate_successors,
    subset_coverage,
    top_candidates,
)
from otextsum.errors import EmptyDocument
from otextsum.text_model import Document, summary_distribution
from toys import prepared, random_toy_document


def test_successor_examples():
    assert generate_successors((), [0, 1, 2], 3) == {(0,), (1,), (2,)}
    assert generate_successors((0,), [0, 1, 2], 3) == {(0, 1), (0, 2)}
    merged = generate_successors((0,), [0, 1], 3) | generate_successors((1,), [0, 1], 3)
    assert merged == {(0, 1)}
    assert generate_successors((0, 1), [0, 1, 2], 2) == set()
    # ineligible indices never appear
    assert generate_successors((), [0, 2], 2) == {(0,), (2,)}


def test_near_ties_go_to_smaller_index_set():
    cands = [Candidate((1, 2), 0.5), Candidate((0, 3), 0.5 - 1e-16), Candidate((0, 1), 0.4)]
    assert [c.selected for c in top_candidates(cands, 3, 1e-12)] == [(0, 3), (1, 2), (0, 1)]
    assert [c.selected for c in top_candidates(cands, 2, 0.0)] == [(1, 2), (0, 3)]
    # a clear gap is never treated as a tie
    assert top_candidates([Candidate((1, 2), 0.5), Candidate((0, 1), 0.4)], 1, 0.05)[0].selected == (1, 2)


def test_config_validation():
    with pytest.raises(ValueError):
        BeamConfig(budget=0)
    with pytest.raises(ValueError):
        BeamConfig(budget=1, beam_width=0)
    with pytest.raises(ValueError):
        BeamConfig(budget=1, tie_tolerance=-1)


def test_single_sentence_forced():
    doc = Document(((0, 1),))
    dists, tfd, C = prepared(doc, np.array([[0.0, 0.0], [1.0, 1.0]]))
    result = beam_search(doc, dists, tfd, C, BeamConfig(budget=1))
    assert result.extraction.tolist() == [1]
    assert result.score == ot.coverage(tfd, dists[0], C) == 1.0


def test_duplicate_sentences_not_both_selected():
    # s, s, q: the pair {s, q} covers more than {s, s}
    doc = Document(((0, 1), (0, 1), (2,)))
    X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 3.0]])
    dists, tfd, C = prepared(doc, X)
    score = lambda s: subset_coverage(s, dists, tfd, C)
    assert score((0, 2)) > score((0, 1))
    result = beam_search(doc, dists, tfd, C, BeamConfig(budget=2, beam_width=5))
    assert result.selected == brute_force_best_subset(score, [0, 1, 2], 2)[1] == (0, 2)


def test_empty_sentences_are_never_candidates():
    doc = Document(((0,), (), (1, 2)))
    rng = np.random.default_rng(0)
    dists, tfd, C = prepared(doc, rng.normal(size=(3, 2)))
    result = beam_search(doc, dists, tfd, C, BeamConfig(budget=3, beam_width=10))
    assert 1 not in result.selected
    for beam in result.trace:
        assert all(1 not in c.selected for c in beam)


def test_no_eligible_sentence():
    doc = Document(((), ()))
    with pytest.raises(EmptyDocument):
        beam_search(doc, np.zeros((2, 1)), np.array([1.0]), np.zeros((1, 1)), BeamConfig(budget=1))


def levels_max(n, budget):
    return max(math.comb(n, k) for k in range(1, min(n, budget) + 1))


def test_matches_exhaustive_search():
    rng = np.random.default_rng(1)
    for _ in range(40):
        doc, X = random_toy_document(rng, n=int(rng.integers(1, 7)))
        budget = int(rng.integers(1, 4))
        dists, tfd, C = prepared(doc, X)
        result = beam_search(doc, dists, tfd, C, BeamConfig(budget, levels_max(doc.n, budget)))
        oracle = brute_force_best_subset(lambda s: subset_coverage(s, dists, tfd, C), doc.eligible(), budget, 1e-12 * C.max())
        assert result.selected == oracle[1]
        assert result.score == oracle[0]


def test_beam_invariants_and_trace():
    rng = np.random.default_rng(2)
    for _ in range(30):
        doc, X = random_toy_document(rng)
        budget, width = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        dists, tfd, C = prepared(doc, X)
        result = beam_search(doc, dists, tfd, C, BeamConfig(budget, width))
        assert 1 <= result.extraction.sum() <= budget
        assert result.n_solves <= budget * width * doc.n + doc.n
        tol = 1e-12 * C.max()
        for beam in result.trace:
            assert len(beam) <= width
            for a, b in zip(beam, beam[1:]):
                assert b.score <= a.score + tol
        # nothing kept anywhere beats the answer by more than the tie tolerance
        assert all(c.score <= result.score + tol for beam in result.trace for c in beam)


def test_monotone_pruning():
    """Kept scores are the K largest of everything scored at that size."""
    rng = np.random.default_rng(3)
    doc, X = random_toy_document(rng, n=7)
    dists, tfd, C = prepared(doc, X)
    result = beam_search(doc, dists, tfd, C, BeamConfig(3, 2))
    prev = [()]
    for beam in result.trace:
        frontier = set().union(*(generate_successors(s, doc.eligible(), 3) for s in prev))
        ranked = sorted((Candidate(s, subset_coverage(s, dists, tfd, C)) for s in frontier), key=lambda c: c.rank_key)
        assert [c.selected for c in beam] == [c.selected for c in ranked[:2]]
        prev = [c.selected for c in beam]


def test_final_beam_only_flag():
    rng = np.random.default_rng(4)
    for _ in range(20):
        doc, X = random_toy_document(rng, n=6)
        dists, tfd, C = prepared(doc, X)
        free = beam_search(doc, dists, tfd, C, BeamConfig(3, 2))
        literal = beam_search(doc, dists, tfd, C, BeamConfig(3, 2, final_beam_only=True))
        assert len(literal.selected) == 3
        assert literal.selected == literal.trace[-1][0].selected
        assert free.score >= literal.score


def test_memoised_solves_match_spy(monkeypatch):
    calls = []
    real = ot.solve

    def spy(*args, **kwargs):
        calls.append(1)
        return real(*args, **kwargs)

    monkeypatch.setattr(ot, "solve", spy)
    rng = np.random.default_rng(5)
    doc, X = random_toy_document(rng, n=6)
    dists, tfd, C = prepared(doc, X)
    result = beam_search(doc, dists, tfd, C, BeamConfig(3, 3))
    assert len(calls) == result.n_solves


def test_deterministic():
    rng = np.random.default_rng(6)
    doc, X = random_toy_document(rng, n=8)
    dists, tfd, C = prepared(doc, X)
    a = beam_search(doc, dists, tfd, C, BeamConfig(3, 2))
    b = beam_search(doc, dists, tfd, C, BeamConfig(3, 2))
    assert np.array_equal(a.extraction, b.extraction) and a.trace_dict() == b.trace_dict()


def test_sinkhorn_scoring_runs():
    rng = np.random.default_rng(7)
    doc, X = random_toy_document(rng, n=5)
    dists, tfd, C = prepared(doc, X)
    result = beam_search(doc, dists, tfd, C, BeamConfig(2, 3), ot.SolverConfig(kind="sinkhorn"))
    summary = summary_distribution(dists, result.extraction)
    assert result.score == pytest.approx(ot.coverage(tfd, summary, C, ot.SolverConfig(kind="sinkhorn")))
