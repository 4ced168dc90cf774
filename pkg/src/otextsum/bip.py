"""Relaxed binary selection optimised by gradient descent.

Each sentence gets a logit ``w_i``. Every step draws a hard multi-hot
sample through the binary concrete (logistic-noise) relaxation, scores
it with the Wasserstein distance plus a budget penalty, and updates
``w`` with straight-through gradients: the backward pass uses the
derivative of the soft sample in place of the rounding step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ot
from .errors import EmptyDocument
from .text_model import summary_distribution

DEGENERATE_LOSS = 10.0


@dataclass(frozen=True)
class BipConfig:
    iterations: int = 200
    alpha: float = 1.0
    lr: float = 0.1
    tau: float = 1.0
    seed: int = 0
    penalty: str = "abs"

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.alpha < 0:
            raise ValueError("alpha must be nonnegative")
        if self.lr <= 0 or self.tau <= 0:
            raise ValueError("lr and tau must be positive")
        if self.penalty not in ("abs", "squared"):
            raise ValueError("penalty must be 'abs' or 'squared'")


@dataclass
class BipResult:
    extraction: np.ndarray
    selected: tuple[int, ...]
    loss_history: np.ndarray
    scores: np.ndarray
    w: np.ndarray
    n_solves: int
    degenerate_iterations: int
    rng: str

    def loss_csv(self) -> str:
        rows = ["iteration,loss"]
        rows += [f"{t},{loss!r}" for t, loss in enumerate(self.loss_history.tolist())]
        return "\n".join(rows) + "\n"

    def trace_dict(self) -> dict:
        return {
            "strategy": "bip",
            "selected": list(self.selected),
            "scores": self.scores.tolist(),
            "w": self.w.tolist(),
            "loss_history": self.loss_history.tolist(),
            "n_solves": self.n_solves,
            "degenerate_iterations": self.degenerate_iterations,
            "rng": self.rng,
        }


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * np.asarray(x, dtype=np.float64)))


def logit(p):
    p = np.asarray(p, dtype=np.float64)
    return np.log(p) - np.log1p(-p)


def gumbel_binary_sample(pr, tau, hard=True, rng=None, noise=None):
    """Binary concrete sample for inclusion probabilities ``pr``.

    ``noise`` is the standard-logistic draw (the difference of two Gumbel
    draws); it is taken from ``rng`` when not given. Returns
    ``(sample, soft)`` where ``sample`` is the rounded soft value if
    ``hard`` is set, else the soft value itself.
    """
    if noise is None:
        rng = rng if rng is not None else np.random.default_rng()
        noise = rng.logistic(size=np.shape(pr))
    soft = sigmoid((logit(pr) + noise) / tau)
    sample = (soft > 0.5).astype(np.float64) if hard else soft
    return sample, soft


def _penalty(k, budget, alpha, kind):
    if kind == "abs":
        return alpha * abs(budget - k), alpha * np.sign(k - budget)
    return alpha * (budget - k) ** 2, 2.0 * alpha * (k - budget)


def weights_gradient(dists, weights, summary, grad_summary):
    """Chain the gradient w.r.t. the summary distribution through the weighted mean.

    For ``S = sum_i m_i TF_i / sum_i m_i`` the partial derivative along
    ``m_k`` is ``(TF_k - S) / sum_i m_i``. Rows must be nonempty sentences.
    """
    return (dists - summary) @ grad_summary / np.sum(weights)


def bip_loss(b, dists, doc_dist, C, budget, alpha, solver_config=None, penalty="abs") -> float:
    """Wasserstein distance of the sampled summary plus the budget penalty."""
    b = np.asarray(b, dtype=np.float64)
    k = float(b.sum())
    if k == 0:
        return DEGENERATE_LOSS + alpha * budget
    summary = summary_distribution(dists, b)
    distance = ot.wasserstein(doc_dist, summary, C, solver_config)
    return distance + _penalty(k, budget, alpha, penalty)[0]


def relaxed_objective(w, dists, doc_dist, C, tau=1.0, solver_config=None):
    """Entropic OT value of the noiseless soft relaxation and its gradient in ``w``.

    The summary uses weights ``sigmoid(w / tau)`` directly, with no
    sampling. ``dists`` must hold nonempty sentences only.
    """
    soft = sigmoid(np.asarray(w, dtype=np.float64) / tau)
    summary = summary_distribution(dists, soft)
    plan = ot.solve_sinkhorn(doc_dist, summary, C, solver_config)
    grad_b = weights_gradient(dists, soft, summary, ot.grad_target_marginal(plan))
    return plan.entropic_value, grad_b * soft * (1.0 - soft) / tau


def bip_optimize(doc, dists, doc_dist, C, budget: int, config: BipConfig | None = None,
                 solver_config: ot.SolverConfig | None = None) -> BipResult:
    """Run the relaxed optimisation and return the top-``budget`` sentences.

    Only nonempty sentences take part. After the last step the sentences
    are ranked by ``sigmoid(w)`` (stable order on ties).
    """
    config = config or BipConfig()
    solver_config = solver_config or ot.SolverConfig(kind="sinkhorn")
    if solver_config.kind != "sinkhorn":
        raise ValueError("the relaxed optimiser needs the sinkhorn solver for dual potentials")
    dists = np.asarray(dists, dtype=np.float64)
    eligible = np.array([i for i in range(doc.n) if dists[i].any()], dtype=np.intp)
    if eligible.size == 0:
        raise EmptyDocument("no sentence has any token")
    sub = dists[eligible]

    rng = np.random.default_rng(config.seed)
    w = np.zeros(eligible.size)
    history = np.empty(config.iterations)
    solves = degenerate = 0
    for t in range(config.iterations):
        b, soft = gumbel_binary_sample(sigmoid(w), config.tau, hard=True, rng=rng)
        k = b.sum()
        # an all-zero draw has no summary; the backward pass already uses the
        # soft sample, so its summary stands in for the transport gradient.
        # If every soft value underflows the step below is zero anyway.
        weights = b if k > 0 else (soft if soft.any() else np.ones_like(soft))
        summary = summary_distribution(sub, weights)
        plan = ot.solve(doc_dist, summary, C, solver_config)
        solves += 1
        pen, dpen = _penalty(k, budget, config.alpha, config.penalty)
        grad_b = weights_gradient(sub, weights, summary, ot.grad_target_marginal(plan)) + dpen
        if k == 0:
            loss = DEGENERATE_LOSS + config.alpha * budget
            degenerate += 1
        else:
            loss = plan.distance + pen
        w = w - config.lr * grad_b * soft * (1.0 - soft) / config.tau
        history[t] = loss

    scores = sigmoid(w)
    top = np.argsort(-scores, kind="stable")[:budget]
    selected = tuple(sorted(int(i) for i in eligible[top]))
    extraction = np.zeros(doc.n, dtype=np.int64)
    extraction[list(selected)] = 1
    full_scores = np.zeros(doc.n)
    full_scores[eligible] = scores
    return BipResult(
        extraction=extraction,
        selected=selected,
        loss_history=history,
        scores=full_scores,
        w=w,
        n_solves=solves,
        degenerate_iterations=degenerate,
        rng=type(rng.bit_generator).__name__,
    )
