"""Brute-force reference implementations used as test oracles.

Everything here is written with explicit Python loops over nodes and samples
so it shares no vectorisation (and no bugs) with the library code.
"""

import math

import numpy as np


def pair_function(tag, xi, xj, means=None, i=None, j=None):
    if tag == "squared_difference":
        return (xi - xj) ** 2
    if tag == "instantaneous_correlation":
        return abs((xi - means[i]) * (xj - means[j]))
    if tag == "pair_average":
        return 0.5 * (xi + xj)
    if tag == "phase_sign":
        return float(np.sign(math.remainder(xi - xj, 2 * math.pi)))
    raise ValueError(tag)


def node_function_tensor(x, tag, means=None):
    """J[t, i, j] by double loop; ``x`` is the per-node input series (n, p)."""
    n, p = x.shape
    out = np.zeros((p, n, n))
    for t in range(p):
        for i in range(n):
            for j in range(n):
                if i != j:
                    out[t, i, j] = pair_function(tag, x[i, t], x[j, t], means, i, j)
    return out


def normalize_columns(x):
    n, p = x.shape
    out = np.zeros_like(x)
    for t in range(p):
        col = x[:, t]
        m = sum(col) / n
        sd = math.sqrt(sum((c - m) ** 2 for c in col) / (n - 1))
        if sd > 0:
            out[:, t] = [(c - m) / sd for c in col]
    return out


def local_clustering(delta):
    """C[i, t] = sum_{j,k} D_ij D_jk D_ki by triple loop."""
    p, n, _ = delta.shape
    out = np.zeros((n, p))
    for t in range(p):
        d = delta[t]
        for i in range(n):
            s = 0.0
            for j in range(n):
                for k in range(n):
                    s += d[i, j] * d[j, k] * d[k, i]
            out[i, t] = s
    return out


def weighted_row_sums(w, j):
    """out[i, t] = sum_k w_ik J_ikt."""
    p, n, _ = j.shape
    out = np.zeros((n, p))
    for t in range(p):
        for i in range(n):
            out[i, t] = sum(w[i, k] * j[t, i, k] for k in range(n))
    return out


def pearson(a, b):
    ma, mb = a.mean(), b.mean()
    num = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    den = math.sqrt(sum((x - ma) ** 2 for x in a) * sum((y - mb) ** 2 for y in b))
    return num / den


def expm_taylor(a, terms=20, squarings=6):
    """Scaled-and-squared Taylor series for exp(a)."""
    b = a / 2.0**squarings
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms + 1):
        term = term @ b / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def random_graph(rng, n, kind="generic", density=1.0):
    w = rng.uniform(-1, 1, size=(n, n)) if kind == "correlation" else rng.uniform(0, 1, size=(n, n))
    w = np.triu(w, 1)
    if density < 1:
        w *= rng.uniform(size=w.shape) < density
    return w + w.T
