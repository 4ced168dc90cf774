"""Beam search over sentence subsets, maximising semantic coverage."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ot
from .errors import EmptyDocument
from .text_model import summary_distribution


@dataclass(frozen=True)
class BeamConfig:
    """``budget`` is the maximum number of sentences, ``beam_width`` the beam size.

    With ``final_beam_only`` the answer is the best member of the last beam,
    as in the plain algorithm; otherwise the best candidate of any size
    seen during the search is returned.

    Scores closer than ``tie_tolerance * max(C)`` count as tied, so that
    round-off cannot decide between candidates that are equal in exact
    arithmetic. Ties go to the lexicographically smaller index set.
    """

    budget: int
    beam_width: int = 5
    final_beam_only: bool = False
    tie_tolerance: float = 1e-12

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.beam_width < 1:
            raise ValueError("beam_width must be at least 1")
        if self.tie_tolerance < 0:
            raise ValueError("tie_tolerance must be nonnegative")


@dataclass(frozen=True)
class Candidate:
    selected: tuple[int, ...]
    score: float

    @property
    def rank_key(self):
        # higher score first, then lexicographically smaller index set
        return (-self.score, self.selected)


@dataclass
class BeamResult:
    extraction: np.ndarray
    selected: tuple[int, ...]
    score: float
    trace: list[list[Candidate]] = field(default_factory=list)
    n_solves: int = 0

    def trace_dict(self) -> dict:
        return {
            "strategy": "beam",
            "selected": list(self.selected),
            "score": self.score,
            "n_solves": self.n_solves,
            "iterations": [
                [{"selected": list(c.selected), "score": c.score} for c in beam] for beam in self.trace
            ],
        }


def generate_successors(selected: tuple[int, ...], eligible, budget: int) -> set[tuple[int, ...]]:
    """All index sets that extend ``selected`` by one eligible sentence."""
    if len(selected) >= budget:
        return set()
    present = set(selected)
    return {tuple(sorted(present | {i})) for i in eligible if i not in present}


def top_candidates(candidates, k: int, tol: float = 0.0) -> list[Candidate]:
    """The ``k`` best candidates, best first.

    Repeatedly takes, among the candidates within ``tol`` of the highest
    remaining score, the one with the smallest index set.
    """
    remaining = sorted(candidates, key=lambda c: c.rank_key)
    out = []
    while remaining and len(out) < k:
        floor = remaining[0].score - tol
        tied = [c for c in remaining if c.score >= floor]
        pick = min(tied, key=lambda c: c.selected)
        out.append(pick)
        remaining.remove(pick)
    return out


def extraction_vector(selected, n: int) -> np.ndarray:
    m = np.zeros(n, dtype=np.int64)
    m[list(selected)] = 1
    return m


def subset_coverage(selected, dists, doc_dist, C, solver_config=None) -> float:
    """Coverage of the summary made of the sentences in ``selected``."""
    summary = summary_distribution(dists, extraction_vector(selected, len(dists)))
    return ot.coverage(doc_dist, summary, C, solver_config)


def beam_search(doc, dists, doc_dist, C, config: BeamConfig, solver_config=None) -> BeamResult:
    """Grow candidate summaries one sentence at a time, keeping the top ``beam_width``.

    Successor sets from all beams are merged before scoring, and scores are
    memoised per index set, so every distinct subset costs one OT solve.
    """
    dists = np.asarray(dists)
    eligible = [i for i in range(doc.n) if dists[i].any()]
    if not eligible:
        raise EmptyDocument("no sentence has any token")

    scores: dict[tuple[int, ...], float] = {}

    def score(selected):
        if selected not in scores:
            scores[selected] = subset_coverage(selected, dists, doc_dist, C, solver_config)
        return scores[selected]

    tol = config.tie_tolerance * float(np.max(np.asarray(getattr(C, "entries", C)), initial=0.0))
    beam = [()]
    trace = []
    while True:
        frontier = set()
        for selected in beam:
            frontier |= generate_successors(selected, eligible, config.budget)
        if not frontier:
            break
        kept = top_candidates([Candidate(s, score(s)) for s in frontier], config.beam_width, tol)
        trace.append(kept)
        beam = [c.selected for c in kept]

    if config.final_beam_only:
        best = trace[-1][0]
    else:
        # every memoised entry is a fully scored candidate
        best = top_candidates([Candidate(s, v) for s, v in scores.items()], 1, tol)[0]
    return BeamResult(
        extraction=extraction_vector(best.selected, doc.n),
        selected=best.selected,
        score=best.score,
        trace=trace,
        n_solves=len(scores),
    )
