"""Independent brute-force references used only by the test suite.

These deliberately share no code with the production paths: dense matrix
recurrences instead of sparse column batches, explicit set arithmetic
instead of bitsets, direct definition evaluation instead of incremental
updates. Size guards keep them honest at test scale only.
"""

import itertools

import numpy as np

MAX_DENSE_N = 2000
MAX_ENUM = 10**6


def dense_transition_hoi(edge_lists, n):
    """Pair weights by double loop over hyperedges and member pairs,
    then symmetric row-sum normalization, all dense."""
    l = np.zeros((n, n))
    for edge in edge_lists:
        members = sorted(set(edge))
        size = len(members)
        for i in members:
            for j in members:
                if i != j:
                    l[i, j] += size - 1
    rowsum = l.sum(axis=1)
    s = np.where(rowsum > 0, 1.0 / np.sqrt(np.where(rowsum > 0, rowsum, 1)), 0.0)
    return s[:, None] * l * s[None, :]


def dense_transition_hgnn(edge_lists, n, weights=None):
    """Dense evaluation of the degree-normalized incidence product."""
    m = len(edge_lists)
    h = np.zeros((n, m))
    for e, edge in enumerate(edge_lists):
        for v in set(edge):
            h[v, e] = 1.0
    w = np.ones(m) if weights is None else np.asarray(weights, float)
    dv = h.sum(axis=1)
    de = h.sum(axis=0)
    dv_is = np.where(dv > 0, dv, 1.0) ** -0.5 * (dv > 0)
    de_inv = np.where(de > 0, 1.0 / np.where(de > 0, de, 1.0), 0.0)
    return (dv_is[:, None] * h) @ np.diag(w * de_inv) @ (h.T * dv_is[None, :])


def dense_influence_matrix(t_dense, k, alpha):
    """M_k by the explicit dense recurrence M_t = a T M_{t-1} + (1-a) I."""
    n = t_dense.shape[0]
    if n > MAX_DENSE_N:
        raise ValueError(f"dense oracle limited to n <= {MAX_DENSE_N}")
    m = np.eye(n)
    for _ in range(k):
        m = alpha * (t_dense @ m) + (1 - alpha) * np.eye(n)
    return m


def dense_propagate(t_dense, x0, k, alpha):
    x = np.array(x0, dtype=float)
    for _ in range(k):
        x = alpha * (t_dense @ x) + (1 - alpha) * np.asarray(x0, float)
    return x


def finite_difference_influence(t_dense, x0, k, alpha, j, u, eps=1e-6):
    """M_k[j, u] estimated channel-wise by perturbing node u's initial
    feature and observing node j's propagated feature."""
    base = dense_propagate(t_dense, x0, k, alpha)
    d = x0.shape[1]
    vals = []
    for c in range(d):
        xp = np.array(x0, dtype=float)
        xp[u, c] += eps
        pert = dense_propagate(t_dense, xp, k, alpha)
        vals.append((pert[j, c] - base[j, c]) / eps)
    return np.asarray(vals)


def activated_set(m_k, theta, seeds):
    """Direct max-then-threshold definition of the activated set."""
    n = m_k.shape[0]
    if not seeds:
        return set()
    s = m_k.sum(axis=1)
    out = set()
    for j in range(n):
        if s[j] <= 0:
            continue
        best = max(m_k[j, u] / s[j] for u in seeds)
        if best > theta:
            out.add(j)
    return out


def feature_balls(points, radius):
    """Per-node radius neighborhoods by double loop."""
    n = points.shape[0]
    balls = []
    for u in range(n):
        members = set()
        for v in range(n):
            if np.linalg.norm(points[u] - points[v]) <= radius:
                members.add(v)
        balls.append(members)
    return balls


def moi_value(m_k, theta, seeds, balls):
    """Union of balls over the activated set, by set union."""
    cov = set()
    for u in activated_set(m_k, theta, seeds):
        cov |= balls[u]
    return len(cov)


def edv_value(edge_lists, n, seeds, beta):
    """Direct product-formula evaluation of the diffusion objective."""
    seeds = set(seeds)
    if not seeds:
        return 0.0
    edge_sets = [set(e) for e in edge_lists]

    def shared(u, v):
        return sum(1 for e in edge_sets if u in e and v in e)

    def degree(u):
        return sum(1 for e in edge_sets if u in e)

    def neighbors(v):
        out = set()
        for e in edge_sets:
            if v in e:
                out |= e
        out.discard(v)
        return out

    frontier = set()
    for u in seeds:
        frontier |= neighbors(u)
    frontier -= seeds

    total = float(len(seeds))
    for v in frontier:
        evade = 1.0
        for u in seeds & neighbors(v):
            evade *= 1.0 - beta * shared(u, v) / degree(u)
        total += 1.0 - evade
    return total


def scratch_objective(edge_lists, n, m_k, theta, balls, seeds, beta,
                      gamma, moi_hat, edv_hat):
    """(MoI, EDV, F) for a seed set, straight from the definitions."""
    moi = moi_value(m_k, theta, seeds, balls)
    edv = edv_value(edge_lists, n, seeds, beta)
    f = gamma * moi / moi_hat + (1 - gamma) * edv / edv_hat
    return moi, edv, f


def exhaustive_best_subset(value_fn, pool, budget):
    """True argmax over all budget-sized subsets; ties go to the
    lexicographically smallest set."""
    from math import comb
    if comb(len(pool), budget) > MAX_ENUM:
        raise ValueError("enumeration guard exceeded")
    best_set, best_val = None, -np.inf
    for combo in itertools.combinations(sorted(pool), budget):
        val = value_fn(set(combo))
        if val > best_val:
            best_set, best_val = combo, val
    return best_set, best_val


def random_hypergraph(rng, n, m, max_size=5):
    """Random edge lists covering ids below n (some nodes may be isolated)."""
    edges = []
    for _ in range(m):
        size = int(rng.integers(1, max_size + 1))
        edges.append(list(rng.choice(n, size=min(size, n), replace=False)))
    return edges
