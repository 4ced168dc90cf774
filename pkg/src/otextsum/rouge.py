"""ROUGE-N and summary-level ROUGE-L on token sequences.

Text is tokenized with the same lowercasing word splitter as the
summarizer, without stop-word removal and without stemming.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from collections.abc import Sequence

from .text_model import word_tokens


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap, n_candidate, n_reference):
        if overlap == 0 or n_candidate == 0 or n_reference == 0:
            return cls(0.0, 0.0, 0.0)
        p = overlap / n_candidate
        r = overlap / n_reference
        return cls(p, r, 2 * p * r / (p + r))


ZERO = RougeScore(0.0, 0.0, 0.0)


def _as_tokens(x) -> list[str]:
    if isinstance(x, str):
        return word_tokens(x)
    return list(x)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n(candidate, reference, n: int = 1) -> RougeScore:
    """Clipped n-gram overlap between ``candidate`` and ``reference``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    cand = ngrams(_as_tokens(candidate), n)
    ref = ngrams(_as_tokens(reference), n)
    overlap = sum((cand & ref).values())
    return RougeScore.from_counts(overlap, sum(cand.values()), sum(ref.values()))


def lcs_length(x: Sequence, y: Sequence) -> int:
    if not x or not y:
        return 0
    prev = [0] * (len(y) + 1)
    for a in x:
        cur = [0]
        for j, b in enumerate(y):
            cur.append(prev[j] + 1 if a == b else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def rouge_l(candidate, reference) -> RougeScore:
    """LCS-based score over the flattened summaries."""
    cand = _as_tokens(candidate)
    ref = _as_tokens(reference)
    return RougeScore.from_counts(lcs_length(cand, ref), len(cand), len(ref))


def rouge_scores(candidate, reference) -> dict[str, RougeScore]:
    return {
        "rouge1": rouge_n(candidate, reference, 1),
        "rouge2": rouge_n(candidate, reference, 2),
        "rougeL": rouge_l(candidate, reference),
    }
