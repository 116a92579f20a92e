"""Dual influence objective: feature-space coverage and one-hop diffusion.

The coverage side activates every node whose normalized influence from the
seed set strictly exceeds a threshold, then counts the union of
feature-space balls around the activated nodes. The diffusion side scores
the expected number of one-hop neighbors activated through shared
hyperedges. Both are monotone and submodular, so the greedy selector keeps
an incrementally updated :class:`CoverageState` and answers marginal-gain
queries without mutation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import kernels
from .errors import ConfigError, DataError
from .hypergraph import Hypergraph
from .propagation import InfluenceColumns, PropagationState

__all__ = [
    "ActivationSets",
    "FeatureBalls",
    "CoverageState",
    "build_activation_sets",
    "build_feature_balls",
    "moi",
    "edv",
    "incremental_add",
    "marginal_gain",
    "unified_objective",
]


class ActivationSets:
    """Per-candidate activated node sets ``A_u = {j : influence > theta}``.

    Stored as one ragged CSR-style array over the candidate order of the
    influence columns.
    """

    def __init__(self, candidates: np.ndarray, indptr: np.ndarray,
                 indices: np.ndarray, theta: float, num_nodes: int):
        self.candidates = candidates
        self.indptr = indptr
        self.indices = indices
        self.theta = theta
        self.num_nodes = num_nodes
        self._col_of = {int(u): c for c, u in enumerate(candidates)}

    def members(self, u: int) -> np.ndarray:
        """Sorted node ids activated by candidate ``u`` alone."""
        try:
            c = self._col_of[int(u)]
        except KeyError:
            raise DataError(f"node {u} is not a stored candidate") from None
        return self.indices[self.indptr[c]:self.indptr[c + 1]]

    def union_mask(self, seeds) -> np.ndarray:
        """Boolean mask of the activated set of ``seeds``."""
        mask = np.zeros(self.num_nodes, dtype=bool)
        for u in seeds:
            mask[self.members(u)] = True
        return mask


def build_activation_sets(ic: InfluenceColumns, theta: float) -> ActivationSets:
    """Threshold the normalized influence columns (strict inequality)."""
    if theta < 0:
        raise ConfigError(f"activation threshold must be >= 0, got {theta}")
    cols = ic.columns
    ncand = ic.candidates.size
    col_ids = np.repeat(np.arange(ncand), np.diff(cols.indptr))
    rows = cols.indices.astype(np.int64)
    # row sums are strictly positive wherever a column entry is nonzero
    norm = cols.data / ic.row_sums[rows]
    keep = norm > theta
    kept_cols = col_ids[keep]
    kept_rows = rows[keep]
    counts = np.bincount(kept_cols, minlength=ncand)
    indptr = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return ActivationSets(ic.candidates, indptr, kept_rows, float(theta),
                          ic.row_sums.size)


class FeatureBalls:
    """Radius-``r`` Euclidean neighborhoods in propagated feature space.

    Memberships are computed lazily (and cached) through a KD-tree for
    low-dimensional features, or blocked brute-force distances otherwise.
    """

    BRUTE_DIM = 16

    def __init__(self, points: np.ndarray, radius: float, cache: bool = True):
        if radius < 0:
            raise ConfigError(f"ball radius must be >= 0, got {radius}")
        self.points = np.ascontiguousarray(points, dtype=np.float64)
        self.radius = float(radius)
        self.num_nodes = self.points.shape[0]
        self._cache: dict[int, np.ndarray] | None = {} if cache else None
        self._tree = None
        if math.isfinite(self.radius) and self.points.shape[1] <= self.BRUTE_DIM:
            self._tree = cKDTree(self.points)

    def members(self, u: int) -> np.ndarray:
        """Sorted node ids within ``radius`` of node ``u`` (always incl. u)."""
        if not 0 <= u < self.num_nodes:
            raise DataError(f"node id {u} out of range")
        if self._cache is not None and u in self._cache:
            return self._cache[u]
        got = self._query_batch(np.asarray([u]))[0]
        if self._cache is not None:
            self._cache[u] = got
        return got

    def _query_batch(self, ids: np.ndarray) -> list[np.ndarray]:
        if not math.isfinite(self.radius):
            full = np.arange(self.num_nodes, dtype=np.int64)
            return [full] * ids.size
        if self._tree is not None:
            hits = self._tree.query_ball_point(self.points[ids], self.radius)
            return [np.sort(np.asarray(h, dtype=np.int64)) for h in hits]
        diff = self.points[ids, None, :] - self.points[None, :, :]
        d2 = np.einsum("ijk,ijk->ij", diff, diff)
        ok = d2 <= self.radius * self.radius + 0.0
        return [np.flatnonzero(ok[i]).astype(np.int64) for i in range(ids.size)]

    def mark_union(self, node_ids: np.ndarray, covered: np.ndarray,
                   batch_size: int = 8192) -> int:
        """Mark the union of the balls of ``node_ids`` in ``covered``;
        return the number of newly covered nodes. Queries stream in
        batches and are not cached."""
        total = 0
        for i in range(0, node_ids.size, batch_size):
            for hit in self._query_batch(node_ids[i:i + batch_size]):
                total += kernels.mark_covered(covered, hit)
            if covered.sum() == covered.size:
                break
        return int(total)


def build_feature_balls(ps: PropagationState, radius: float,
                        cache: bool = True) -> FeatureBalls:
    """Balls over the k-step propagated features."""
    return FeatureBalls(ps.propagated_features, radius, cache=cache)


def _check_beta(beta: float) -> None:
    if not 0.0 < beta < 1.0:
        raise ConfigError(f"diffusion probability beta must lie in (0, 1), got {beta}")


class CoverageState:
    """Incremental state of the seed set's coverage and diffusion values.

    Single-writer; :meth:`moi_gain` / :meth:`edv_gain` are pure reads and
    may be evaluated for any number of candidates against a frozen state.
    """

    def __init__(self, g: Hypergraph, acts: ActivationSets,
                 balls: FeatureBalls, beta: float):
        _check_beta(beta)
        self.graph = g
        self.acts = acts
        self.balls = balls
        self.beta = beta
        n = g.num_nodes
        self.seed_set: set[int] = set()
        self.seed_order: list[int] = []
        self.in_seed = np.zeros(n, dtype=bool)
        self.activated = np.zeros(n, dtype=bool)
        self.covered = np.zeros(n, dtype=np.uint8)
        self._scratch = np.zeros(n, dtype=np.uint8)
        self.evasion = np.ones(n, dtype=np.float64)
        self.is_neighbor = np.zeros(n, dtype=bool)
        self.moi_value = 0
        self.edv_value = 0.0

    # -- pure reads -------------------------------------------------------

    def _new_activations(self, v: int) -> np.ndarray:
        a_v = self.acts.members(v)
        return a_v[~self.activated[a_v]]

    def moi_gain(self, v: int) -> int:
        """Coverage nodes added by seeding ``v``, without mutating."""
        self._check_candidate(v)
        new_act = self._new_activations(v)
        if new_act.size == 0:
            return 0
        idx = np.concatenate([self.balls.members(j) for j in new_act])
        return int(kernels.count_uncovered_unique(self.covered, idx, self._scratch))

    def edv_gain(self, v: int) -> float:
        """Expected-diffusion gain of seeding ``v``, without mutating."""
        self._check_candidate(v)
        g = self.graph
        gain = self.evasion[v]  # v's own term moves into the seed count
        d_v = g.node_degree[v]
        if d_v > 0:
            indptr, indices, counts = g.adjacency()
            nb = indices[indptr[v]:indptr[v + 1]]
            ct = counts[indptr[v]:indptr[v + 1]]
            free = ~self.in_seed[nb]
            gain += self.beta / d_v * float(self.evasion[nb[free]] @ ct[free])
        return float(gain)

    # -- mutation ---------------------------------------------------------

    def add(self, v: int) -> "CoverageState":
        """Seed ``v``: extend activation/coverage and update evasion
        products for v's non-seed neighbors."""
        self._check_candidate(v)
        new_act = self._new_activations(v)
        for j in new_act:
            self.moi_value += kernels.mark_covered(self.covered,
                                                   self.balls.members(j))
        self.activated[new_act] = True

        self.edv_value += self.edv_gain(v)
        g = self.graph
        d_v = g.node_degree[v]
        if d_v > 0:
            indptr, indices, counts = g.adjacency()
            nb = indices[indptr[v]:indptr[v + 1]]
            ct = counts[indptr[v]:indptr[v + 1]]
            free = ~self.in_seed[nb]
            nb, ct = nb[free], ct[free]
            self.evasion[nb] *= 1.0 - self.beta * ct / d_v
            self.is_neighbor[nb] = True
        self.seed_set.add(int(v))
        self.seed_order.append(int(v))
        self.in_seed[v] = True
        self.is_neighbor[v] = False
        return self

    def _check_candidate(self, v: int) -> None:
        if not 0 <= v < self.graph.num_nodes:
            raise DataError(f"node id {v} out of range")
        if v in self.seed_set:
            raise DataError(f"node {v} is already a seed")


def moi(state: CoverageState) -> int:
    """Current coverage value (size of the union of activated balls)."""
    return state.moi_value


def edv(g: Hypergraph, seeds, beta: float) -> float:
    """Expected diffusion value of a seed set, evaluated from scratch."""
    _check_beta(beta)
    seed_arr = np.asarray(sorted(set(int(s) for s in seeds)), dtype=np.int64)
    if seed_arr.size == 0:
        return 0.0
    if seed_arr[0] < 0 or seed_arr[-1] >= g.num_nodes:
        raise DataError("seed id out of range")
    in_seed = np.zeros(g.num_nodes, dtype=bool)
    in_seed[seed_arr] = True
    evasion = np.ones(g.num_nodes, dtype=np.float64)
    touched = np.zeros(g.num_nodes, dtype=bool)
    indptr, indices, counts = g.adjacency()
    for u in seed_arr:
        d_u = g.node_degree[u]
        if d_u == 0:
            continue
        nb = indices[indptr[u]:indptr[u + 1]]
        ct = counts[indptr[u]:indptr[u + 1]]
        free = ~in_seed[nb]
        evasion[nb[free]] *= 1.0 - beta * ct[free] / d_u
        touched[nb[free]] = True
    return float(seed_arr.size + np.sum(1.0 - evasion[touched]))


def incremental_add(state: CoverageState, v: int) -> CoverageState:
    """Add ``v`` to the seed set, updating coverage and diffusion state."""
    return state.add(v)


def marginal_gain(state: CoverageState, v: int, gamma: float,
                  moi_hat: float, edv_hat: float) -> float:
    """Gain of the unified objective from seeding ``v`` (pure read)."""
    return unified_objective(state.moi_gain(v), state.edv_gain(v),
                             moi_hat, edv_hat, gamma)


def unified_objective(moi_val: float, edv_val: float, moi_hat: float,
                      edv_hat: float, gamma: float) -> float:
    """Convex combination of coverage and diffusion, each normalized by
    its whole-graph value."""
    if not 0.0 <= gamma <= 1.0:
        raise ConfigError(f"gamma must lie in [0, 1], got {gamma}")
    if moi_hat <= 0 or edv_hat <= 0:
        raise ConfigError(
            "degenerate objective normalizer (theta too high or empty "
            f"hypergraph): moi_hat={moi_hat}, edv_hat={edv_hat}")
    return gamma * moi_val / moi_hat + (1.0 - gamma) * edv_val / edv_hat
