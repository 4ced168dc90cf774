# Compare beam search, the relaxed BIP optimizer and brute force on random toys.
# Run: python3 demos/beam_vs_bip.py

from itertools import combinations

import numpy as np

from otextsum import BeamConfig, BipConfig, Document, beam_search, bip_optimize, coverage
from otextsum import cost_matrix, document_distribution, sentence_distributions
from otextsum.embeddings import pairwise_costs
from otextsum.text_model import summary_distribution
from otextsum.beam import extraction_vector

rng = np.random.default_rng(7)
budget = 2
rows = []
for trial in range(10):
    n, vocab = 6, 8
    sentences = tuple(tuple(rng.integers(0, vocab, size=rng.integers(2, 6))) for _ in range(n))
    doc = Document(sentences)
    X = rng.normal(size=(vocab, 4))
    C = pairwise_costs(X)
    dists = sentence_distributions(doc, vocab)
    tfd = document_distribution(dists)

    def score(sel):
        return coverage(tfd, summary_distribution(dists, extraction_vector(sel, n)), C)

    # beam may return fewer than B sentences, so search every size up to B
    subsets = [s for k in range(1, budget + 1) for s in combinations(doc.eligible(), k)]
    best = max(subsets, key=score)
    beam = beam_search(doc, dists, tfd, C, BeamConfig(budget, beam_width=3))
    # lr 0.1 is the default; a larger step lets the sampled gradient outrun its noise
    slow = bip_optimize(doc, dists, tfd, C, budget, BipConfig(iterations=200, seed=trial))
    fast = bip_optimize(doc, dists, tfd, C, budget, BipConfig(iterations=200, seed=trial, lr=2.0))
    rows.append((score(best), beam.score, score(slow.selected), score(fast.selected), beam.n_solves, slow.n_solves))

rows = np.array(rows)
print("   best    beam  bip .1   bip 2  beam solves  bip solves")
for r in rows:
    print(f"{r[0]:7.4f} {r[1]:7.4f} {r[2]:7.4f} {r[3]:7.4f} {int(r[4]):12d} {int(r[5]):11d}")
print("beam matches brute force:", int(np.sum(np.isclose(rows[:, 0], rows[:, 1]))), "of", len(rows))
for col, name in ((2, "bip lr 0.1"), (3, "bip lr 2")):
    print(name, "matches brute force:", int(np.sum(np.isclose(rows[:, 0], rows[:, col]))), "of", len(rows))
