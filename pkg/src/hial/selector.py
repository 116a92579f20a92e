"""Greedy budgeted seed selection maximizing the unified objective.

Two equivalent paths: a naive reference that re-scores every remaining
candidate each round, and a lazy path that keeps stale gains in a priority
queue and re-scores only the top until it is fresh (valid because the
objective is submodular, so stale gains are upper bounds). Ties always go
to the smallest node id, which makes the two paths produce identical seed
sequences.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import objective, propagation
from .errors import ConfigError
from .hypergraph import Hypergraph

__all__ = [
    "SelectionConfig",
    "SelectionResult",
    "SelectionContext",
    "prepare",
    "normalizers",
    "select_naive",
    "select_lazy",
]

AUTO = "auto"


@dataclass(frozen=True)
class SelectionConfig:
    """All scalar knobs of the selection pipeline.

    ``theta`` and ``radius`` accept the literal ``"auto"``, resolved to
    dataset-adaptive quantiles during :func:`prepare`.
    """

    budget: int
    k: int = 2
    alpha: float = 0.9
    theta: float | str = AUTO
    radius: float | str = AUTO
    beta: float = 0.1
    gamma: float = 0.5
    backend: str = propagation.HOI
    candidate_pool: tuple[int, ...] | None = None
    theta_quantile: float = 0.95
    radius_quantile: float = 0.05
    rng_seed: int = 0

    def validate(self, num_nodes: int) -> None:
        pool = self.resolve_pool(num_nodes)
        if not 1 <= self.budget <= pool.size:
            raise ConfigError(
                f"budget must lie in [1, {pool.size}], got {self.budget}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.k < 0:
            raise ConfigError(f"k must be >= 0, got {self.k}")
        if not 0.0 < self.beta < 1.0:
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.backend not in (propagation.HOI, propagation.HGNN):
            raise ConfigError(f"unknown backend {self.backend!r}")
        for name, val in (("theta", self.theta), ("radius", self.radius)):
            if isinstance(val, str) and val != AUTO:
                raise ConfigError(f"{name} must be a number or 'auto', got {val!r}")
            if not isinstance(val, str) and val < 0:
                raise ConfigError(f"{name} must be >= 0, got {val}")
        for name, q in (("theta_quantile", self.theta_quantile),
                        ("radius_quantile", self.radius_quantile)):
            if not 0.0 < q < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {q}")

    def resolve_pool(self, num_nodes: int) -> np.ndarray:
        if self.candidate_pool is None:
            return np.arange(num_nodes, dtype=np.int64)
        pool = np.asarray(sorted(set(int(v) for v in self.candidate_pool)),
                          dtype=np.int64)
        if pool.size == 0:
            raise ConfigError("candidate pool is empty")
        if pool[0] < 0 or pool[-1] >= num_nodes:
            raise ConfigError("candidate pool contains out-of-range node ids")
        return pool


@dataclass(frozen=True)
class SelectionResult:
    """Ordered seeds with per-step gains and objective trace."""

    seeds: list[int]
    gains: list[float]
    trace: list[tuple[int, float, float]]  # (moi, edv, F) after each step
    resolved_params: dict
    n_evaluations: int = 0


@dataclass
class SelectionContext:
    """Frozen selection inputs shared by the naive and lazy paths."""

    graph: Hypergraph
    config: SelectionConfig  # with theta/radius resolved to numbers
    pool: np.ndarray
    transition: propagation.TransitionMatrix
    prop_state: propagation.PropagationState
    columns: propagation.InfluenceColumns
    acts: objective.ActivationSets
    balls: objective.FeatureBalls
    moi_hat: float
    edv_hat: float
    resolved_params: dict = field(default_factory=dict)

    def fresh_state(self) -> objective.CoverageState:
        return objective.CoverageState(self.graph, self.acts, self.balls,
                                       self.config.beta)


def _resolve_theta(cfg: SelectionConfig,
                   ic: propagation.InfluenceColumns) -> float:
    if cfg.theta != AUTO:
        return float(cfg.theta)
    data = ic.columns.data
    if data.size == 0:
        raise ConfigError("no nonzero influence entries; cannot auto-resolve theta")
    norm = data / ic.row_sums[ic.columns.indices]
    return float(np.quantile(norm, cfg.theta_quantile))


def _resolve_radius(cfg: SelectionConfig, feats: np.ndarray) -> float:
    if cfg.radius != AUTO:
        return float(cfg.radius)
    n = feats.shape[0]
    if n < 2:
        return 0.0
    rng = np.random.default_rng(cfg.rng_seed)
    n_pairs = min(20000, n * (n - 1) // 2)
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n - 1, size=n_pairs)
    j = np.where(j >= i, j + 1, j)  # distinct pair without rejection
    dist = np.linalg.norm(feats[i] - feats[j], axis=1)
    return float(np.quantile(dist, cfg.radius_quantile))


def normalizers(g: Hypergraph, sigma_all: np.ndarray,
                balls: objective.FeatureBalls,
                beta: float) -> tuple[int, float]:
    """Whole-graph objective values used as normalization constants."""
    covered = np.zeros(g.num_nodes, dtype=np.uint8)
    moi_hat = balls.mark_union(np.flatnonzero(sigma_all), covered)
    if moi_hat == 0:
        raise ConfigError("whole-graph coverage is empty: theta excludes "
                          "every node; lower theta or its quantile")
    edv_hat = objective.edv(g, np.arange(g.num_nodes), beta)
    return moi_hat, edv_hat


def prepare(g: Hypergraph, features: np.ndarray,
            cfg: SelectionConfig) -> SelectionContext:
    """Build the propagation, influence, and coverage structures for a
    selection run, resolving any 'auto' parameters."""
    cfg.validate(g.num_nodes)
    pool = cfg.resolve_pool(g.num_nodes)
    t = propagation.build_transition(g, cfg.backend)
    ps = propagation.propagate(t, features, cfg.k, cfg.alpha)
    ic = propagation.influence_columns(t, pool, cfg.k, cfg.alpha)
    theta = _resolve_theta(cfg, ic)
    radius = _resolve_radius(cfg, ps.propagated_features)
    resolved = replace(cfg, theta=theta, radius=radius)
    acts = objective.build_activation_sets(ic, theta)
    balls = objective.build_feature_balls(ps, radius)
    if pool.size == g.num_nodes:
        sigma_all = np.zeros(g.num_nodes, dtype=bool)
        sigma_all[acts.indices] = True
    else:
        sigma_all = propagation.activated_mask_all(t, cfg.k, cfg.alpha, theta)
    moi_hat, edv_hat = normalizers(g, sigma_all, balls, cfg.beta)
    params = {
        "budget": cfg.budget, "k": cfg.k, "alpha": cfg.alpha,
        "theta": theta, "radius": radius, "beta": cfg.beta,
        "gamma": cfg.gamma, "backend": cfg.backend,
        "moi_hat": moi_hat, "edv_hat": edv_hat,
    }
    return SelectionContext(g, resolved, pool, t, ps, ic, acts, balls,
                            moi_hat, edv_hat, params)


def _gain(ctx: SelectionContext, state: objective.CoverageState,
          v: int) -> float:
    return objective.marginal_gain(state, v, ctx.config.gamma,
                                   ctx.moi_hat, ctx.edv_hat)


def _objective_value(ctx: SelectionContext,
                     state: objective.CoverageState) -> float:
    return objective.unified_objective(state.moi_value, state.edv_value,
                                       ctx.moi_hat, ctx.edv_hat,
                                       ctx.config.gamma)


def select_naive(ctx: SelectionContext) -> SelectionResult:
    """Reference greedy: every round scores all remaining candidates and
    picks the argmax (lowest id on ties)."""
    state = ctx.fresh_state()
    seeds: list[int] = []
    gains: list[float] = []
    trace: list[tuple[int, float, float]] = []
    remaining = list(ctx.pool)
    evals = 0
    for _ in range(ctx.config.budget):
        best_v, best_g = -1, -math.inf
        for v in remaining:  # ascending ids: strict > keeps the lowest id
            g = _gain(ctx, state, int(v))
            evals += 1
            if g > best_g:
                best_v, best_g = int(v), g
        state.add(best_v)
        remaining.remove(best_v)
        seeds.append(best_v)
        gains.append(best_g)
        trace.append((state.moi_value, state.edv_value,
                      _objective_value(ctx, state)))
    return SelectionResult(seeds, gains, trace, dict(ctx.resolved_params),
                           evals)


def select_lazy(ctx: SelectionContext) -> SelectionResult:
    """CELF-style greedy: stale gains are upper bounds under
    submodularity, so only the queue top is ever re-scored. Produces the
    same seed sequence as :func:`select_naive`."""
    state = ctx.fresh_state()
    seeds: list[int] = []
    gains: list[float] = []
    trace: list[tuple[int, float, float]] = []
    evals = 0
    heap: list[tuple[float, int, int]] = []
    for v in ctx.pool:
        heap.append((-_gain(ctx, state, int(v)), int(v), 0))
        evals += 1
    heapq.heapify(heap)
    for round_no in range(ctx.config.budget):
        while True:
            neg_g, v, stamp = heapq.heappop(heap)
            if stamp == round_no:
                break
            g = _gain(ctx, state, v)
            evals += 1
            heapq.heappush(heap, (-g, v, round_no))
        state.add(v)
        seeds.append(v)
        gains.append(-neg_g)
        trace.append((state.moi_value, state.edv_value,
                      _objective_value(ctx, state)))
    return SelectionResult(seeds, gains, trace, dict(ctx.resolved_params),
                           evals)
