"""Random toy instances shared by the test modules."""

import numpy as np

from otextsum.embeddings import pairwise_costs
from otextsum.text_model import Document, document_distribution, sentence_distributions


def random_marginal(rng, p, sparsity=0.0):
    """Dirichlet vector of length ``p``; with ``sparsity`` some entries are zeroed."""
    x = rng.dirichlet(np.ones(p))
    if sparsity:
        keep = rng.random(p) >= sparsity
        keep[rng.integers(p)] = True
        x = np.where(keep, x, 0.0)
        x /= x.sum()
    return x


def random_metric_costs(rng, p, dim=None):
    """Euclidean distances between random points: a symmetric metric with zero diagonal."""
    dim = dim or int(rng.integers(1, 5))
    return pairwise_costs(rng.normal(size=(p, dim)))


def random_ot_instance(rng, p_max=8):
    p = int(rng.integers(2, p_max + 1))
    return (
        random_marginal(rng, p, sparsity=0.25),
        random_marginal(rng, p, sparsity=0.25),
        random_metric_costs(rng, p),
    )


def random_toy_document(rng, n=None, vocab_size=10, dim=None, max_len=5):
    """Document of ``n`` nonempty sentences over at most ``vocab_size`` tokens.

    Returns ``(doc, embeddings)`` where the embedding row ``j`` belongs to
    active token ``j``.
    """
    n = n or int(rng.integers(1, 9))
    dim = dim or int(rng.integers(2, 9))
    raw = [rng.integers(0, vocab_size, size=int(rng.integers(1, max_len + 1))) for _ in range(n)]
    index = {}
    sentences = tuple(tuple(index.setdefault(int(t), len(index)) for t in s) for s in raw)
    return Document(sentences), rng.normal(size=(len(index), dim))


def prepared(doc, X, metric="euclidean"):
    """``(dists, doc_dist, C)`` for a toy document and its embeddings."""
    dists = sentence_distributions(doc, len(X))
    return dists, document_distribution(dists), pairwise_costs(X, metric)


def centroid_document(seed, n_parts=4, length=3, vocab_size=12, dim=4):
    """Toy document holding one sentence whose distribution equals the document's.

    ``n_parts`` sentences of ``length`` tokens plus their concatenation, in
    random order. Because every part has the same length, the
    concatenation's distribution is the mean of the parts, which is also
    the document distribution. Returns ``(doc, dists, doc_dist, C, target)``.
    """
    rng = np.random.default_rng(seed)
    parts = [tuple(int(t) for t in rng.choice(vocab_size, length, replace=False)) for _ in range(n_parts)]
    sentences = [sum(parts, ())] + parts
    order = rng.permutation(len(sentences))
    sentences = [sentences[i] for i in order]
    target = int(np.flatnonzero(order == 0)[0])
    used = sorted(set(sum(parts, ())))
    remap = {t: i for i, t in enumerate(used)}
    doc = Document(tuple(tuple(remap[t] for t in s) for s in sentences))
    X = rng.normal(size=(len(used), dim))
    dists, doc_dist, C = prepared(doc, X)
    return doc, dists, doc_dist, C, target
