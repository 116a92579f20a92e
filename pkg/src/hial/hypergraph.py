"""Immutable sparse hypergraph with the structural queries used by
propagation and the diffusion objective.

Node and hyperedge ids are dense integers in ``[0, n)`` and ``[0, m)``.
Incidence is binary: duplicate node ids inside one hyperedge are collapsed
at build time.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError

__all__ = ["Hypergraph", "build"]


class Hypergraph:
    """Sparse incidence structure with degree tables and neighbor indices.

    Instances are immutable after construction; all query methods are
    read-only and safe to call concurrently.
    """

    def __init__(self, incidence: sp.csr_matrix, edge_weights: np.ndarray):
        # incidence: n x m binary CSR, rows = nodes, cols = hyperedges
        self._h = incidence
        self._ht = incidence.T.tocsr()
        self.num_nodes = incidence.shape[0]
        self.num_edges = incidence.shape[1]
        self.node_degree = np.diff(self._h.indptr).astype(np.int64)
        self.edge_degree = np.diff(self._ht.indptr).astype(np.int64)
        self.edge_weights = edge_weights
        self._adj = None

    # -- incidence access ------------------------------------------------

    @property
    def incidence(self) -> sp.csr_matrix:
        """Binary n x m incidence matrix (CSR)."""
        return self._h

    def node_to_edges(self, v: int) -> np.ndarray:
        """Sorted hyperedge ids containing node ``v``."""
        self._check_node(v)
        return self._h.indices[self._h.indptr[v]:self._h.indptr[v + 1]]

    def edge_to_nodes(self, e: int) -> np.ndarray:
        """Sorted node ids belonging to hyperedge ``e``."""
        if not 0 <= e < self.num_edges:
            raise DataError(f"hyperedge id {e} out of range [0, {self.num_edges})")
        return self._ht.indices[self._ht.indptr[e]:self._ht.indptr[e + 1]]

    # -- structural queries ----------------------------------------------

    def shared_edge_count(self, u: int, v: int) -> int:
        """Number of hyperedges containing both ``u`` and ``v``."""
        self._check_node(u)
        self._check_node(v)
        if u == v:
            raise DataError("shared_edge_count requires two distinct nodes")
        return int(np.intersect1d(
            self.node_to_edges(u), self.node_to_edges(v),
            assume_unique=True).size)

    def one_hop_neighbors(self, v: int) -> np.ndarray:
        """Sorted ids of nodes sharing at least one hyperedge with ``v``."""
        self._check_node(v)
        indptr, indices, _ = self.adjacency()
        return indices[indptr[v]:indptr[v + 1]].copy()

    def neighborhood_of_set(self, seeds: Iterable[int]) -> np.ndarray:
        """One-hop neighbors of the set, excluding the set itself."""
        seed_arr = np.asarray(sorted(set(int(s) for s in seeds)), dtype=np.int64)
        if seed_arr.size and (seed_arr[0] < 0 or seed_arr[-1] >= self.num_nodes):
            raise DataError("seed id out of range")
        mask = np.zeros(self.num_nodes, dtype=bool)
        indptr, indices, _ = self.adjacency()
        for s in seed_arr:
            mask[indices[indptr[s]:indptr[s + 1]]] = True
        mask[seed_arr] = False
        return np.flatnonzero(mask)

    def adjacency(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Pairwise co-membership structure as CSR ``(indptr, indices, counts)``.

        ``counts[p]`` is the number of hyperedges shared by node ``i`` and
        its neighbor ``indices[p]``; the diagonal is removed. Built once
        and cached.
        """
        if self._adj is None:
            a = (self._h @ self._ht).tocsr()
            a.setdiag(0)
            a.eliminate_zeros()
            a.sort_indices()
            self._adj = (a.indptr.copy(), a.indices.astype(np.int64),
                         a.data.astype(np.int64))
        return self._adj

    # -- helpers ----------------------------------------------------------

    def _check_node(self, v: int) -> None:
        if not 0 <= v < self.num_nodes:
            raise DataError(f"node id {v} out of range [0, {self.num_nodes})")

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.num_nodes}, m={self.num_edges})"


def build(edge_node_lists: Sequence[Sequence[int]],
          num_nodes: int | None = None,
          edge_weights: Sequence[float] | None = None) -> Hypergraph:
    """Build a hypergraph from per-hyperedge node-id lists.

    Duplicate ids within one hyperedge are deduplicated. An edge that is
    empty (after dedup) is rejected, as is any out-of-range node id.
    ``num_nodes`` defaults to ``max id + 1``. ``edge_weights`` are used
    only by the HGNN-style propagation backend and default to 1.
    """
    m = len(edge_node_lists)
    dedup = []
    max_id = -1
    for e, members in enumerate(edge_node_lists):
        uniq = sorted(set(int(v) for v in members))
        if not uniq:
            raise DataError(f"hyperedge {e} is empty")
        if uniq[0] < 0:
            raise DataError(f"hyperedge {e} contains negative node id {uniq[0]}")
        max_id = max(max_id, uniq[-1])
        dedup.append(uniq)
    n = (max_id + 1) if num_nodes is None else int(num_nodes)
    if max_id >= n:
        raise DataError(f"node id {max_id} out of range for declared count {n}")

    rows = np.fromiter((v for uniq in dedup for v in uniq), dtype=np.int64,
                       count=sum(len(u) for u in dedup))
    cols = np.repeat(np.arange(m, dtype=np.int64),
                     [len(u) for u in dedup]) if m else np.empty(0, np.int64)
    data = np.ones(rows.size, dtype=np.float64)
    h = sp.csr_matrix((data, (rows, cols)), shape=(n, m))
    h.sort_indices()

    if edge_weights is None:
        w = np.ones(m, dtype=np.float64)
    else:
        w = np.asarray(edge_weights, dtype=np.float64)
        if w.shape != (m,):
            raise DataError(f"expected {m} edge weights, got shape {w.shape}")
        if np.any(w < 0):
            raise DataError("edge weights must be non-negative")
    return Hypergraph(h, w)
