import numpy as np
import pytest

from hial import (
    ConfigError,
    DataError,
    build,
    build_hgnn_transition,
    build_hoi_transition,
    influence_columns,
    normalized_influence,
    propagate,
)
from hial.propagation import activated_mask_all, row_sum_vector
import oracles


def small_instance(seed, n_max=8):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, n_max + 1))
    edges = oracles.random_hypergraph(rng, n, int(rng.integers(1, 10)))
    g = build(edges, num_nodes=n)
    x = rng.normal(size=(n, 4))
    return g, edges, n, x, rng


def test_hoi_single_triangle_edge():
    g = build([[0, 1, 2]], num_nodes=3)
    t = build_hoi_transition(g)
    # raw pair weight is (3-1)=2 everywhere off-diagonal; row sums are 4
    raw = oracles.dense_transition_hoi([[0, 1, 2]], 3)
    np.testing.assert_allclose(t.matrix.toarray(), raw, atol=1e-12)
    assert raw[0, 1] == pytest.approx(2 / 4)


def test_hoi_pair_weight_accumulates_across_edges():
    edges = [[0, 1, 2], [1, 2]]
    g = build(edges, num_nodes=3)
    scale = build_hoi_transition(g)
    # unnormalized weight between 1 and 2: (3-1) + (2-1) = 3
    l = oracles.dense_transition_hoi(edges, 3)
    np.testing.assert_allclose(scale.matrix.toarray(), l, atol=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_hoi_matches_bruteforce(seed):
    g, edges, n, _, _ = small_instance(seed)
    t = build_hoi_transition(g)
    expect = oracles.dense_transition_hoi(edges, n)
    np.testing.assert_allclose(t.matrix.toarray(), expect, atol=1e-12)
    assert np.all(np.abs(np.diag(t.matrix.toarray())) == 0)
    # symmetric
    np.testing.assert_allclose(t.matrix.toarray(), t.matrix.toarray().T,
                               atol=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_spectral_radius_bounded(seed):
    g, *_ = small_instance(seed)
    dense = build_hoi_transition(g).matrix.toarray()
    eigs = np.linalg.eigvalsh(dense)
    assert np.max(np.abs(eigs)) <= 1.0 + 1e-6


def test_hgnn_single_pair_edge():
    g = build([[0, 1]], num_nodes=2)
    t = build_hgnn_transition(g)
    np.testing.assert_allclose(t.matrix.toarray(),
                               [[0.5, 0.5], [0.5, 0.5]], atol=1e-12)


def test_hgnn_singleton():
    g = build([[0]], num_nodes=1)
    t = build_hgnn_transition(g)
    np.testing.assert_allclose(t.matrix.toarray(), [[1.0]], atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_hgnn_matches_dense_product(seed):
    g, edges, n, _, rng = small_instance(seed)
    w = rng.uniform(0.1, 2.0, size=g.num_edges)
    t = build_hgnn_transition(g, w)
    expect = oracles.dense_transition_hgnn(edges, n, w)
    np.testing.assert_allclose(t.matrix.toarray(), expect, atol=1e-12)


def test_hgnn_isolated_node_zero_row():
    g = build([[0, 1]], num_nodes=3)
    t = build_hgnn_transition(g)
    assert np.all(t.matrix.toarray()[2] == 0)


def test_propagate_alpha_zero_is_identity():
    g, _, n, x, _ = small_instance(1)
    t = build_hoi_transition(g)
    ps = propagate(t, x, 5, 0.0)
    np.testing.assert_array_equal(ps.propagated_features, x)


def test_propagate_k_zero():
    g, _, n, x, _ = small_instance(2)
    t = build_hoi_transition(g)
    ps = propagate(t, x, 0, 0.7)
    np.testing.assert_array_equal(ps.propagated_features, x)


def test_propagate_shape_mismatch_rejected():
    g = build([[0, 1]], num_nodes=2)
    t = build_hoi_transition(g)
    with pytest.raises(DataError):
        propagate(t, np.zeros((3, 2)), 1, 0.5)
    with pytest.raises(ConfigError):
        propagate(t, np.zeros((2, 2)), 1, 1.5)
    with pytest.raises(ConfigError):
        propagate(t, np.zeros((2, 2)), -1, 0.5)


@pytest.mark.parametrize("seed", range(10))
def test_propagate_matches_dense_influence_product(seed):
    g, edges, n, x, _ = small_instance(seed)
    t = build_hoi_transition(g)
    for k in (1, 2, 3):
        ps = propagate(t, x, k, 0.6)
        m_k = oracles.dense_influence_matrix(t.matrix.toarray(), k, 0.6)
        np.testing.assert_allclose(ps.propagated_features, m_k @ x, atol=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_propagate_linearity(seed):
    g, _, n, x, rng = small_instance(seed)
    y = rng.normal(size=x.shape)
    a, b = 0.7, -1.3
    t = build_hoi_transition(g)
    lhs = propagate(t, a * x + b * y, 3, 0.5).propagated_features
    rhs = (a * propagate(t, x, 3, 0.5).propagated_features
           + b * propagate(t, y, 3, 0.5).propagated_features)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-12)


def test_influence_columns_k0_and_alpha0():
    g, _, n, _, _ = small_instance(3)
    t = build_hoi_transition(g)
    for k, alpha in ((0, 0.8), (4, 0.0)):
        ic = influence_columns(t, range(n), k, alpha)
        np.testing.assert_allclose(ic.columns.toarray(), np.eye(n), atol=1e-12)
        for j in range(n):
            for u in range(n):
                expect = 1.0 if j == u else 0.0
                assert normalized_influence(ic, j, u) == pytest.approx(expect)


@pytest.mark.parametrize("seed", range(15))
def test_influence_columns_match_dense_recurrence(seed):
    g, _, n, _, rng = small_instance(seed)
    t = build_hoi_transition(g)
    k, alpha = int(rng.integers(1, 4)), float(rng.uniform(0.1, 1.0))
    cands = sorted(rng.choice(n, size=min(3, n), replace=False))
    ic = influence_columns(t, cands, k, alpha)
    m_k = oracles.dense_influence_matrix(t.matrix.toarray(), k, alpha)
    for c, u in enumerate(cands):
        np.testing.assert_allclose(
            np.asarray(ic.columns[:, c].todense()).ravel(), m_k[:, u],
            atol=1e-10)
    np.testing.assert_allclose(ic.row_sums, m_k.sum(axis=1), atol=1e-10)
    np.testing.assert_allclose(row_sum_vector(t, k, alpha),
                               m_k.sum(axis=1), atol=1e-10)


def test_influence_columns_rejects_bad_candidates():
    g = build([[0, 1]], num_nodes=2)
    t = build_hoi_transition(g)
    with pytest.raises(DataError):
        influence_columns(t, [5], 1, 0.5)
    with pytest.raises(DataError):
        influence_columns(t, [], 1, 0.5)


@pytest.mark.parametrize("seed", range(10))
def test_normalized_influence_matches_finite_differences(seed):
    g, _, n, x, rng = small_instance(seed)
    t = build_hoi_transition(g)
    k, alpha = 2, 0.7
    ic = influence_columns(t, range(n), k, alpha)
    t_dense = t.matrix.toarray()
    for _ in range(5):
        j = int(rng.integers(n))
        u = int(rng.integers(n))
        fd = oracles.finite_difference_influence(t_dense, x, k, alpha, j, u)
        expect = np.asarray(ic.columns.todense())[j, list(ic.candidates).index(u)]
        np.testing.assert_allclose(fd, np.full(fd.size, expect),
                                   rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("seed", range(10))
def test_influence_normalization_sums_to_one(seed):
    g, _, n, _, _ = small_instance(seed)
    t = build_hoi_transition(g)
    ic = influence_columns(t, range(n), 2, 0.6)
    full = ic.columns.toarray()
    for j in range(n):
        vals = [normalized_influence(ic, j, u) for u in range(n)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert sum(vals) == pytest.approx(1.0)
    assert np.all(full >= 0)
    assert np.all(ic.row_sums >= (1 - 0.6) - 1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_activated_mask_all_matches_union(seed):
    g, _, n, _, _ = small_instance(seed)
    t = build_hoi_transition(g)
    k, alpha, theta = 2, 0.8, 0.05
    ic = influence_columns(t, range(n), k, alpha)
    m_k = oracles.dense_influence_matrix(t.matrix.toarray(), k, alpha)
    expect = oracles.activated_set(m_k, theta, set(range(n)))
    mask = activated_mask_all(t, k, alpha, theta, batch_size=3)
    assert set(np.flatnonzero(mask)) == expect
