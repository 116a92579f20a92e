"""Feature propagation over the hypergraph.

Two transition-matrix constructions are provided:

* ``hoi`` weights node pairs by the total size of their shared interaction
  groups (the sum over shared hyperedges of the edge size minus one),
  symmetrically degree-normalized, zero diagonal.
* ``hgnn`` is the classical two-stage node/edge degree-normalized product,
  kept as an alternative backend.

Propagation mixes the smoothed signal with the initial features:
``X <- alpha * T X + (1 - alpha) * X0``. Because the recurrence is linear
and channel-wise, the influence of node u's initial feature on node j's
k-step feature is a scalar ``M_k[j, u]`` obeying the same recurrence with
the identity as input; only candidate columns and the row-sum vector are
ever materialized.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, DataError
from .hypergraph import Hypergraph

__all__ = [
    "TransitionMatrix",
    "PropagationState",
    "InfluenceColumns",
    "build_hoi_transition",
    "build_hgnn_transition",
    "build_transition",
    "propagate",
    "influence_columns",
    "row_sum_vector",
    "normalized_influence",
    "activated_mask_all",
]

log = logging.getLogger(__name__)

HOI = "hoi"
HGNN = "hgnn"


@dataclass(frozen=True)
class TransitionMatrix:
    """Symmetric non-negative n x n transition matrix plus its provenance."""

    matrix: sp.csr_matrix
    backend: str

    @property
    def num_nodes(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class PropagationState:
    """Initial and k-step propagated features."""

    initial_features: np.ndarray
    propagated_features: np.ndarray
    k: int
    alpha: float


@dataclass(frozen=True)
class InfluenceColumns:
    """Influence-matrix columns for a candidate set.

    ``columns[:, c]`` is ``M_k[:, candidates[c]]`` and ``row_sums[j]`` is
    the full-row normalizer ``sum_l M_k[j, l]``.
    """

    candidates: np.ndarray          # int64, sorted candidate node ids
    columns: sp.csc_matrix          # n x len(candidates), non-negative
    row_sums: np.ndarray            # float64, length n
    k: int
    alpha: float
    _col_of: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._col_of.update({int(u): c for c, u in enumerate(self.candidates)})

    def column(self, u: int) -> np.ndarray:
        """Dense influence column of candidate ``u``."""
        try:
            c = self._col_of[int(u)]
        except KeyError:
            raise DataError(f"node {u} is not a stored candidate") from None
        return np.asarray(self.columns[:, c].todense()).ravel()


def _check_alpha_k(alpha: float, k: int) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must lie in [0, 1], got {alpha}")
    if k < 0:
        raise ConfigError(f"step count must be non-negative, got {k}")


def build_hoi_transition(g: Hypergraph) -> TransitionMatrix:
    """Interaction-aware transition: pair weight = sum over shared
    hyperedges of (edge size - 1), zero diagonal, then D^-1/2 L D^-1/2
    with D the diagonal of row sums."""
    h = g.incidence
    scale = sp.diags((g.edge_degree - 1).astype(np.float64))
    raw = (h @ scale @ h.T).tocsr()
    raw.setdiag(0)
    raw.eliminate_zeros()
    return TransitionMatrix(_symmetric_normalize(raw), HOI)


def build_hgnn_transition(g: Hypergraph,
                          edge_weights: np.ndarray | None = None) -> TransitionMatrix:
    """Degree-normalized two-stage transition
    ``Dv^-1/2 H W De^-1 H^T Dv^-1/2`` (zero rows for isolated nodes)."""
    w = g.edge_weights if edge_weights is None else np.asarray(edge_weights, float)
    if w.shape != (g.num_edges,):
        raise DataError(f"expected {g.num_edges} edge weights, got {w.shape}")
    if np.any(w < 0):
        raise DataError("edge weights must be non-negative")
    h = g.incidence
    dv = _inv_sqrt(g.node_degree.astype(np.float64))
    de = g.edge_degree.astype(np.float64)
    de_inv = np.divide(1.0, de, out=np.zeros_like(de), where=de > 0)
    t = (sp.diags(dv) @ h @ sp.diags(w * de_inv) @ h.T @ sp.diags(dv)).tocsr()
    t.eliminate_zeros()
    return TransitionMatrix(t, HGNN)


def build_transition(g: Hypergraph, backend: str = HOI) -> TransitionMatrix:
    if backend == HOI:
        return build_hoi_transition(g)
    if backend == HGNN:
        return build_hgnn_transition(g)
    raise ConfigError(f"unknown propagation backend {backend!r}")


def _inv_sqrt(d: np.ndarray) -> np.ndarray:
    out = np.zeros_like(d)
    np.divide(1.0, np.sqrt(d, out=np.zeros_like(d), where=d > 0),
              out=out, where=d > 0)
    return out


def _symmetric_normalize(l: sp.csr_matrix) -> sp.csr_matrix:
    rowsum = np.asarray(l.sum(axis=1)).ravel()
    s = _inv_sqrt(rowsum)
    out = (sp.diags(s) @ l @ sp.diags(s)).tocsr()
    out.eliminate_zeros()
    return out


def propagate(t: TransitionMatrix, x0: np.ndarray, k: int,
              alpha: float) -> PropagationState:
    """Apply ``X <- alpha T X + (1 - alpha) X0`` for ``k`` steps."""
    _check_alpha_k(alpha, k)
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.ndim == 1:
        x0 = x0[:, None]
    if x0.shape[0] != t.num_nodes:
        raise DataError(
            f"feature matrix has {x0.shape[0]} rows, expected {t.num_nodes}")
    x = x0
    for _ in range(k):
        x = alpha * (t.matrix @ x) + (1.0 - alpha) * x0
    return PropagationState(x0, np.ascontiguousarray(x), k, alpha)


def row_sum_vector(t: TransitionMatrix, k: int, alpha: float) -> np.ndarray:
    """Row sums of M_k via the same recurrence applied to the ones vector."""
    _check_alpha_k(alpha, k)
    ones = np.ones(t.num_nodes, dtype=np.float64)
    s = ones.copy()
    for _ in range(k):
        s = alpha * (t.matrix @ s) + (1.0 - alpha) * ones
    return s


def _basis_block(n: int, ids: np.ndarray) -> sp.csc_matrix:
    data = np.ones(ids.size, dtype=np.float64)
    indptr = np.arange(ids.size + 1)
    return sp.csc_matrix((data, ids.astype(np.int32), indptr), shape=(n, ids.size))


def _column_block(t: TransitionMatrix, ids: np.ndarray, k: int,
                  alpha: float) -> sp.csc_matrix:
    e = _basis_block(t.num_nodes, ids)
    v = e
    for _ in range(k):
        v = alpha * (t.matrix @ v) + (1.0 - alpha) * e
    v = v.tocsc()
    v.eliminate_zeros()
    v.sort_indices()
    return v


def influence_columns(t: TransitionMatrix, candidates, k: int, alpha: float,
                      batch_size: int = 4096) -> InfluenceColumns:
    """Columns of the influence matrix for each candidate, plus row sums.

    Columns are computed in sparse batches (k sparse products per batch);
    the full n x n matrix is never formed.
    """
    _check_alpha_k(alpha, k)
    cand = np.asarray(sorted(set(int(u) for u in candidates)), dtype=np.int64)
    if cand.size == 0:
        raise DataError("candidate set is empty")
    if cand[0] < 0 or cand[-1] >= t.num_nodes:
        raise DataError("candidate node id out of range")
    blocks = [_column_block(t, cand[i:i + batch_size], k, alpha)
              for i in range(0, cand.size, batch_size)]
    cols = blocks[0] if len(blocks) == 1 else sp.hstack(blocks, format="csc")
    return InfluenceColumns(cand, cols, row_sum_vector(t, k, alpha), k, alpha)


_warned_zero_row = False


def normalized_influence(ic: InfluenceColumns, j: int, u: int) -> float:
    """Influence of candidate ``u`` on node ``j`` divided by j's full-row
    normalizer; 0 when the normalizer vanishes (isolated node, alpha=1)."""
    col = ic.column(u)
    if not 0 <= j < col.size:
        raise DataError(f"node id {j} out of range")
    s = ic.row_sums[j]
    if s <= 0.0:
        global _warned_zero_row
        if not _warned_zero_row:
            log.warning("zero influence normalizer for node %d; "
                        "treating influence as 0", j)
            _warned_zero_row = True
        return 0.0
    return float(col[j] / s)


def activated_mask_all(t: TransitionMatrix, k: int, alpha: float, theta: float,
                       batch_size: int = 4096) -> np.ndarray:
    """Boolean mask of nodes activated when every node is a seed.

    Node j is marked iff some column u has normalized influence on j
    strictly above ``theta``. Runs in batches over all columns.
    """
    _check_alpha_k(alpha, k)
    n = t.num_nodes
    s = row_sum_vector(t, k, alpha)
    mask = np.zeros(n, dtype=bool)
    all_ids = np.arange(n, dtype=np.int64)
    for i in range(0, n, batch_size):
        block = _column_block(t, all_ids[i:i + batch_size], k, alpha).tocoo()
        ok = block.data > theta * s[block.row]
        mask[block.row[ok]] = True
    return mask
