"""Discrete optimal transport between two distributions over one vocabulary.

Two solvers share the :class:`TransportPlan` result type:

* ``solve_exact`` runs the transportation simplex on a spanning-tree
  basis with Bland's pivoting rule, so results are deterministic.
* ``solve_sinkhorn`` runs log-domain Sinkhorn iterations on the
  entropic problem ``min <P, C> + eps * KL(P | mu x nu)`` and returns the
  dual potentials as well, which give gradients with respect to the
  marginals.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .errors import InfeasibleMarginals, MissingDuals, NonConvergence, NonConvergenceWarning

MASS_TOL = 1e-9
# flows this small are round-off from degenerate pivots
FLOW_FLOOR = 1e-14


@dataclass(frozen=True)
class SolverConfig:
    """Solver selection and stopping rules.

    ``epsilon=None`` means ``0.1 * mean(C)``. With ``kind="exact"``
    problems larger than ``exact_cap`` fall back to Sinkhorn.
    """

    kind: str = "exact"
    epsilon: float | None = None
    max_iters: int = 2000
    tolerance: float = 1e-6
    exact_cap: int = 64
    epsilon_scaling: bool = False
    scaling_factor: float = 0.5
    newton_after: int | None = 200
    strict: bool = False

    def __post_init__(self):
        if self.kind not in ("exact", "sinkhorn"):
            raise ValueError(f"unknown solver kind {self.kind!r}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 0 < self.scaling_factor < 1:
            raise ValueError("scaling_factor must lie in (0, 1)")


@dataclass(frozen=True)
class TransportPlan:
    flows: np.ndarray
    distance: float
    duals: tuple[np.ndarray, np.ndarray] | None = None
    entropic_value: float | None = None
    epsilon: float | None = None
    violation: float = 0.0
    iterations: int = 0
    converged: bool = True
    solver: str = "exact"


def _cost_array(C) -> np.ndarray:
    return np.asarray(getattr(C, "entries", C), dtype=np.float64)


def _check_inputs(mu, nu, C):
    mu = np.asarray(mu, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    C = _cost_array(C)
    if mu.ndim != 1 or nu.ndim != 1 or C.shape != (mu.size, nu.size):
        raise ValueError(f"shape mismatch: mu {mu.shape}, nu {nu.shape}, C {C.shape}")
    for name, x in (("mu", mu), ("nu", nu)):
        if np.any(x < 0) or not np.all(np.isfinite(x)):
            raise InfeasibleMarginals(f"{name} has negative or non-finite entries")
        if not x.any():
            raise InfeasibleMarginals(f"{name} is the zero vector")
        if abs(x.sum() - 1.0) > MASS_TOL:
            raise InfeasibleMarginals(f"{name} sums to {x.sum()!r}, not 1")
    return mu, nu, C


def _max_violation(flows, mu, nu) -> float:
    return float(max(np.abs(flows.sum(axis=1) - mu).max(), np.abs(flows.sum(axis=0) - nu).max()))


# -- exact solver -----------------------------------------------------------


def _northwest_corner(a, b):
    m, k = len(a), len(b)
    ra, rb = a.copy(), b.copy()
    flows = np.zeros((m, k))
    basis = []
    i = j = 0
    while True:
        x = min(ra[i], rb[j])
        flows[i, j] = x
        basis.append((i, j))
        ra[i] -= x
        rb[j] -= x
        if i == m - 1 and j == k - 1:
            return flows, basis
        if j == k - 1 or (i < m - 1 and ra[i] == 0.0):
            i += 1
        else:
            j += 1


def _potentials(adj, C, m, k):
    # row nodes 0..m-1, column nodes m..m+k-1; u_0 = 0
    pot = np.full(m + k, np.nan)
    pot[0] = 0.0
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for nb in adj[node]:
            if np.isnan(pot[nb]):
                if node < m:
                    pot[nb] = C[node, nb - m] - pot[node]
                else:
                    pot[nb] = C[nb, node - m] - pot[node]
                queue.append(nb)
    return pot[:m], pot[m:]


def _tree_path(adj, start, goal):
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        if node == goal:
            break
        for nb in adj[node]:
            if nb not in parent:
                parent[nb] = node
                queue.append(nb)
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    return path[::-1]


def _transport_simplex(a, b, C):
    m, k = len(a), len(b)
    flows, basis = _northwest_corner(a, b)
    adj = [set() for _ in range(m + k)]
    for i, j in basis:
        adj[i].add(m + j)
        adj[m + j].add(i)
    scale = float(np.abs(C).max())
    if m == 1 or k == 1 or scale == 0.0:
        return flows, 0
    tol = 1e-12 * scale

    iterations = 0
    while True:
        u, v = _potentials(adj, C, m, k)
        reduced = C - u[:, None] - v[None, :]
        improving = np.flatnonzero(reduced < -tol)
        if improving.size == 0:
            return flows, iterations
        # Bland: lowest-index entering cell in row-major order
        ei, ej = divmod(int(improving[0]), k)

        # cycle: entering cell, then the tree path from column ej back to row ei
        path = _tree_path(adj, m + ej, ei)
        cells = []
        for s, t in zip(path[:-1], path[1:]):
            cells.append((t, s - m) if s >= m else (s, t - m))
        minus = cells[0::2]
        plus = cells[1::2]
        theta = min(flows[c] for c in minus)
        leave = min(c for c in minus if flows[c] == theta)

        for c in plus:
            flows[c] += theta
        for c in minus:
            flows[c] -= theta
        flows[ei, ej] += theta
        flows[leave] = 0.0

        li, lj = leave
        adj[li].discard(m + lj)
        adj[m + lj].discard(li)
        adj[ei].add(m + ej)
        adj[m + ej].add(ei)
        iterations += 1


def solve_exact(mu, nu, C) -> TransportPlan:
    """Optimal plan of the linear transport program.

    Zero-mass rows and columns carry no flow, so only the supports are
    handed to the simplex and the plan is scattered back to full size.
    """
    mu, nu, C = _check_inputs(mu, nu, C)
    rows = np.flatnonzero(mu)
    cols = np.flatnonzero(nu)
    sub, iterations = _transport_simplex(mu[rows], nu[cols], C[np.ix_(rows, cols)])
    flows = np.zeros(C.shape)
    flows[np.ix_(rows, cols)] = np.where(sub > FLOW_FLOOR, sub, 0.0)
    distance = float(np.sum(flows * C))
    return TransportPlan(
        flows=flows,
        distance=distance,
        violation=_max_violation(flows, mu, nu),
        iterations=iterations,
        solver="exact",
    )


# -- entropic solver --------------------------------------------------------


def _lse(x, axis):
    top = np.max(x, axis=axis, keepdims=True)
    top = np.where(np.isfinite(top), top, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(x - top), axis=axis, keepdims=True)) + top
    return np.squeeze(out, axis=axis)


def default_epsilon(C) -> float:
    mean = float(_cost_array(C).mean())
    return 0.1 * mean if mean > 0 else 1.0


def _log_plan(log_a, log_b, C, eps, f, g):
    return log_a[:, None] + log_b[None, :] + (f[:, None] + g[None, :] - C) / eps


def _sinkhorn_loop(log_a, log_b, a, C, eps, f, g, max_iters, tol, newton_after=None):
    violation = np.inf
    it = 0
    for it in range(1, max_iters + 1):
        f = -eps * _lse(log_b[None, :] + (g[None, :] - C) / eps, axis=1)
        g = -eps * _lse(log_a[:, None] + (f[:, None] - C) / eps, axis=0)
        if it % 10 == 0 or it == max_iters:
            flows = np.exp(_log_plan(log_a, log_b, C, eps, f, g))
            violation = float(np.abs(flows.sum(axis=1) - a).max())
            if violation < tol:
                break
            if newton_after is not None and it >= newton_after:
                f, g, ok = _newton_polish(log_a, log_b, C, eps, f, g, tol)
                if ok:
                    break
                newton_after = None
    return f, g, it, violation


def _newton_polish(log_a, log_b, C, eps, f, g, tol, max_steps=100):
    """Newton ascent on the entropic dual over the marginal supports.

    The Hessian is the weighted bipartite Laplacian of the current plan;
    its gauge null direction is removed by pinning the last target
    potential. Steps are backtracked on the L1 marginal residual.
    Returns the (possibly unchanged) potentials and whether ``tol`` was met.
    """
    rows = np.flatnonzero(np.isfinite(log_a))
    cols = np.flatnonzero(np.isfinite(log_b))
    la, lb, Cs = log_a[rows], log_b[cols], C[np.ix_(rows, cols)]
    a, b = np.exp(la), np.exp(lb)
    fs, gs = f[rows].copy(), g[cols].copy()
    m = len(rows)

    def residual(fs, gs):
        with np.errstate(over="ignore"):
            flows = np.exp(_log_plan(la, lb, Cs, eps, fs, gs))
        return flows, np.concatenate([a - flows.sum(axis=1), b - flows.sum(axis=0)])

    flows, res = residual(fs, gs)
    for _ in range(max_steps):
        if np.abs(res).max() < tol:
            break
        hess = np.block([[np.diag(flows.sum(axis=1)), flows], [flows.T, np.diag(flows.sum(axis=0))]])
        step = np.linalg.lstsq(hess[:-1, :-1], eps * res[:-1], rcond=None)[0]
        step = np.append(step, 0.0)
        t = 1.0
        while t > 1e-8:
            new_flows, new_res = residual(fs + t * step[:m], gs + t * step[m:])
            if np.abs(new_res).sum() < np.abs(res).sum():
                break
            t *= 0.5
        else:
            return f, g, False
        fs, gs = fs + t * step[:m], gs + t * step[m:]
        flows, res = new_flows, new_res
    if np.abs(res).max() >= tol:
        return f, g, False

    # extend potentials to zero-mass tokens by the soft c-transform
    g = g.copy()
    g[cols] = gs
    f = -eps * _lse(log_b[None, :] + (g[None, :] - C) / eps, axis=1)
    f[rows] = fs
    g = -eps * _lse(log_a[:, None] + (f[:, None] - C) / eps, axis=0)
    g[cols] = gs
    return f, g, True


def solve_sinkhorn(mu, nu, C, config: SolverConfig | None = None) -> TransportPlan:
    """Entropic plan with dual potentials ``(f, g)``.

    With ``config.epsilon_scaling`` the regularisation starts at
    ``max(C)`` and shrinks by ``scaling_factor`` per stage down to the
    target epsilon, warm-starting each stage from the previous potentials.
    Potentials are defined on every token, including zero-mass ones.
    """
    config = config or SolverConfig(kind="sinkhorn")
    mu, nu, C = _check_inputs(mu, nu, C)
    eps = config.epsilon if config.epsilon is not None else default_epsilon(C)

    schedule = [eps]
    if config.epsilon_scaling:
        e = float(C.max())
        while e > eps:
            schedule.insert(-1, e)
            e *= config.scaling_factor

    with np.errstate(divide="ignore"):
        log_a, log_b = np.log(mu), np.log(nu)
    f = np.zeros(len(mu))
    g = np.zeros(len(nu))
    total = 0
    for e in schedule:
        f, g, it, violation = _sinkhorn_loop(
            log_a, log_b, mu, C, e, f, g, config.max_iters, config.tolerance, config.newton_after
        )
        total += it

    flows = np.exp(_log_plan(log_a, log_b, C, eps, f, g))
    violation = _max_violation(flows, mu, nu)
    value = float(f @ mu + g @ nu - eps * (flows.sum() - 1.0))
    plan = TransportPlan(
        flows=flows,
        distance=float(np.sum(flows * C)),
        duals=(f, g),
        entropic_value=value,
        epsilon=eps,
        violation=violation,
        iterations=total,
        converged=violation < config.tolerance,
        solver="sinkhorn",
    )
    if not plan.converged:
        if config.strict:
            raise NonConvergence(violation, plan)
        warnings.warn(
            f"sinkhorn stopped after {total} iterations with marginal violation {violation:.3e}",
            NonConvergenceWarning,
            stacklevel=2,
        )
    return plan


# -- dispatch ---------------------------------------------------------------


def solve(mu, nu, C, config: SolverConfig | None = None) -> TransportPlan:
    config = config or SolverConfig()
    if config.kind == "exact" and len(np.asarray(mu)) <= config.exact_cap:
        return solve_exact(mu, nu, C)
    if config.kind == "exact":
        config = replace(config, kind="sinkhorn")
    return solve_sinkhorn(mu, nu, C, config)


def wasserstein(mu, nu, C, config: SolverConfig | None = None) -> float:
    return solve(mu, nu, C, config).distance


def coverage(doc_dist, summary_dist, C, config: SolverConfig | None = None) -> float:
    """Semantic coverage ``1 - W(doc, summary)``; may be negative for large costs."""
    return 1.0 - wasserstein(doc_dist, summary_dist, C, config)


def grad_target_marginal(plan: TransportPlan) -> np.ndarray:
    """Gradient of the entropic OT value w.r.t. the target marginal.

    This is the target potential, centered to zero mean to remove the
    additive gauge freedom of the duals.
    """
    if plan.duals is None:
        raise MissingDuals("plan carries no dual potentials; use the sinkhorn solver")
    g = plan.duals[1]
    return g - g.mean()
