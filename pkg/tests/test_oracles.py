"""Checks on the reference computations themselves."""

import numpy as np
import pytest

from oracles import (
    _pruefer_trees,
    bipartite_vertex_min,
    brute_force_best_subset,
    lcs_brute_force,
    transshipment_vertex_min,
)
from toys import random_marginal, random_metric_costs


@pytest.mark.parametrize("p", [2, 3, 4, 5, 6])
def test_tree_count_is_cayley(p):
    trees = _pruefer_trees(p)
    assert len(trees) == p ** (p - 2)
    canon = {frozenset(frozenset(map(int, e)) for e in t) for t in trees}
    assert len(canon) == len(trees)
    for t in trees[:50]:
        # p - 1 edges touching every node form a spanning tree
        assert len({int(v) for e in t for v in e}) == p


def test_transshipment_agrees_with_bipartite_enumeration():
    rng = np.random.default_rng(0)
    for _ in range(40):
        p = int(rng.integers(2, 4))
        a, b, C = random_marginal(rng, p), random_marginal(rng, p), random_metric_costs(rng, p)
        assert transshipment_vertex_min(a, b, C) == pytest.approx(bipartite_vertex_min(a, b, C), abs=1e-12)


def test_two_by_two_vertices():
    C = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert transshipment_vertex_min([0.5, 0.5], [0.25, 0.75], C) == pytest.approx(0.25)
    assert bipartite_vertex_min([0.5, 0.5], [0.25, 0.75], C) == pytest.approx(0.25)


def test_lcs_brute_force():
    assert lcs_brute_force("abc", "axc") == 2
    assert lcs_brute_force("abcd", "dcba") == 1
    assert lcs_brute_force("", "abc") == 0


def test_subset_enumeration_tie_break():
    scores = {(0,): 1.0, (1,): 1.0, (0, 1): 0.5}
    assert brute_force_best_subset(scores.__getitem__, [1, 0], 2) == (1.0, (0,))
