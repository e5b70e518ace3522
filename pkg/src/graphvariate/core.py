"""Node-function tensors, graph weighting and per-sample network measures.

Tensors are slice-major ``(p, n, n)``.  Every operation that would otherwise
materialise a tensor also has a streaming counterpart that works on blocks of
``chunk`` consecutive samples, so that ``n = 128, p = 2048`` style problems
never need the full ~256 MB array in memory.
"""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .signals import (
    DimensionError,
    InstantaneousNetworkTensor,
    MultivariateSignal,
    NodeFunctionKind,
    WeightedGraph,
    as_graph,
    as_signal,
)

DEFAULT_CHUNK = 256


def node_normalize(signal: MultivariateSignal) -> MultivariateSignal:
    """Standardise every sample across nodes (mean 0, ``ddof=1`` std 1).

    Columns with zero spread map to zeros.
    """
    x = signal.data
    centred = x - x.mean(axis=0, keepdims=True)
    sd = np.sqrt((centred**2).sum(axis=0) / (signal.n - 1))
    out = np.zeros_like(x)
    ok = sd > 0
    out[:, ok] = centred[:, ok] / sd[ok]
    return signal.with_data(out)


def wrapped_phase_sign(phi_a: np.ndarray, phi_b: np.ndarray) -> np.ndarray:
    """``sgn`` of the phase difference wrapped to (-pi, pi); ``sgn(0) = 0``.

    Evaluated as ``sign(sin(a - b))`` which is exactly odd in ``a - b``.
    """
    return np.sign(np.sin(phi_a - phi_b))


def _node_inputs(signal: MultivariateSignal, kind: NodeFunctionKind) -> np.ndarray:
    """Per-node series that the pairwise function is evaluated on, shape (n, p)."""
    kind.check_dimensions(signal.n, signal.p)
    tag = kind.tag
    if tag == "squared_difference":
        return node_normalize(signal).data
    if tag == "instantaneous_correlation":
        return np.abs(signal.data - kind.means[:, None])
    if tag == "envelope_squared_difference":
        return kind.envelope
    if tag == "envelope_instantaneous_correlation":
        return np.abs(kind.envelope - kind.envelope_means[:, None])
    if tag == "phase_sign":
        return kind.phase
    return signal.data


def _pairwise(tag: str, u: np.ndarray) -> np.ndarray:
    """Pairwise function on a block ``u`` of shape (b, n); returns (b, n, n)."""
    a = u[:, :, None]
    b = u[:, None, :]
    if tag in ("squared_difference", "envelope_squared_difference"):
        out = (a - b) ** 2
    elif tag in ("instantaneous_correlation", "envelope_instantaneous_correlation"):
        out = a * b
    elif tag == "phase_sign":
        out = wrapped_phase_sign(a, b)
    elif tag == "pair_average":
        out = 0.5 * (a + b)
    else:  # pragma: no cover - tags are validated on construction
        raise ValueError(tag)
    i = np.arange(u.shape[1])
    out[:, i, i] = 0.0
    return out


def iter_node_function_slices(
    signal: MultivariateSignal, kind: NodeFunctionKind, chunk: int = DEFAULT_CHUNK
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield ``(start, block)`` with ``block[t - start] = J_(t)`` for each chunk."""
    signal = as_signal(signal)
    u = _node_inputs(signal, kind)
    for start in range(0, signal.p, chunk):
        yield start, _pairwise(kind.tag, u[:, start : start + chunk].T)


def node_function_tensor(
    signal: MultivariateSignal, kind: NodeFunctionKind
) -> InstantaneousNetworkTensor:
    """Materialise ``J`` with ``J_ijt = F(x_i(t), x_j(t))`` and ``J_iit = 0``."""
    signal = as_signal(signal)
    u = _node_inputs(signal, kind)
    return InstantaneousNetworkTensor(_pairwise(kind.tag, u.T))


def _slices(j) -> np.ndarray:
    if isinstance(j, InstantaneousNetworkTensor):
        return j.slices
    j = np.asarray(j, dtype=float)
    if j.ndim != 3 or j.shape[1] != j.shape[2]:
        raise DimensionError(f"expected a (p, n, n) tensor, got shape {j.shape}")
    return j


def _check_nodes(graph: WeightedGraph, n: int) -> None:
    if graph.n != n:
        raise DimensionError(f"graph has {graph.n} nodes, tensor has {n}")


def graph_weighted_tensor(graph: WeightedGraph, j) -> InstantaneousNetworkTensor:
    """``Delta_(t) = W o J_(t)`` for every sample."""
    graph = as_graph(graph)
    s = _slices(j)
    _check_nodes(graph, s.shape[1])
    return InstantaneousNetworkTensor(graph.weights[None, :, :] * s)


def iter_graph_weighted_slices(
    graph: WeightedGraph,
    signal: MultivariateSignal,
    kind: NodeFunctionKind,
    chunk: int = DEFAULT_CHUNK,
) -> Iterator[tuple[int, np.ndarray]]:
    """Streaming ``W o J``; yields ``(start, block)`` like the node-function stream."""
    graph = as_graph(graph)
    _check_nodes(graph, as_signal(signal).n)
    w = graph.weights[None, :, :]
    for start, block in iter_node_function_slices(signal, kind, chunk):
        yield start, w * block


def signal_product(graph: WeightedGraph, j) -> np.ndarray:
    """Graph-weighted node sums ``out[i, t] = sum_j w_ij J_ijt``.

    This is the row sum of every ``W o J_(t)`` slice, so that ``F = x_j``
    gives ``W X`` and ``F = x_i - x_j`` gives ``(D - W) X``.  See
    :func:`column_signal_product` for the row-by-column variant.
    """
    graph = as_graph(graph)
    s = _slices(j)
    _check_nodes(graph, s.shape[1])
    return (graph.weights[None, :, :] * s).sum(axis=2).T


def column_signal_product(graph: WeightedGraph, j) -> np.ndarray:
    """``out[i, t] = sum_j w_ij J_jit``: row ``i`` of ``W`` dotted with column ``i`` of ``J_(t)``.

    Agrees with :func:`signal_product` for symmetric slices and flips sign for
    antisymmetric ones.
    """
    graph = as_graph(graph)
    s = _slices(j)
    _check_nodes(graph, s.shape[1])
    return (graph.weights[None, :, :] * s.transpose(0, 2, 1)).sum(axis=2).T


def node_function_row_sums(
    graph: WeightedGraph,
    signal: MultivariateSignal,
    kind: NodeFunctionKind,
    chunk: int = DEFAULT_CHUNK,
) -> np.ndarray:
    """``sum_j w_ij F(x_i(t), x_j(t))`` for all ``i, t`` without building ``J``.

    Symmetric node functions are expanded into matrix products (``O(n^2 p)``);
    the phase-sign function is streamed chunk by chunk.
    """
    graph = as_graph(graph)
    signal = as_signal(signal)
    _check_nodes(graph, signal.n)
    w = graph.weights
    tag = kind.tag
    if tag == "phase_sign":
        out = np.empty((signal.n, signal.p))
        for start, block in iter_node_function_slices(signal, kind, chunk):
            out[:, start : start + block.shape[0]] = (w[None] * block).sum(axis=2).T
        return out
    u = _node_inputs(signal, kind)
    if tag in ("instantaneous_correlation", "envelope_instantaneous_correlation"):
        return u * (w @ u)
    if tag == "pair_average":
        return 0.5 * (graph.degrees[:, None] * u + w @ u)
    # squared differences: sum_j w_ij (u_i - u_j)^2
    return graph.degrees[:, None] * u**2 - 2.0 * u * (w @ u) + w @ (u**2)


def local_clustering(delta) -> np.ndarray:
    """Per-sample clustering ``C(i, t) = (Delta_(t)^3)_ii``; returns (n, p).

    ``delta`` is a tensor, a ``(p, n, n)`` array, or an iterable of such
    blocks (e.g. the output of :func:`iter_graph_weighted_slices`, whose
    ``(start, block)`` pairs are also accepted).
    """
    if isinstance(delta, (InstantaneousNetworkTensor, np.ndarray)):
        blocks: Iterable = [_slices(delta)]
    else:
        blocks = delta
    cols = []
    for block in blocks:
        if isinstance(block, tuple):
            block = block[1]
        block = _slices(block)
        sq = np.matmul(block, block)
        cols.append(np.einsum("tij,tji->it", sq, block))
    return np.concatenate(cols, axis=1)


def dirichlet_energy(graph: WeightedGraph, x) -> float:
    """Half the weighted sum of squared differences over all ordered pairs.

    With the factor one half this equals ``x^T (D - W) x``.
    """
    graph = as_graph(graph)
    x = np.asarray(x, dtype=float)
    if x.shape != (graph.n,):
        raise DimensionError(f"expected a vector of length {graph.n}, got {x.shape}")
    diff2 = (x[:, None] - x[None, :]) ** 2
    return 0.5 * float((graph.weights * diff2).sum())


def linear_pair_tensor(signal: MultivariateSignal, coefficients) -> np.ndarray:
    """``J_ijt = a_ij x_i(t) + a_ji x_j(t)`` (zero diagonal), shape (p, n, n)."""
    x = as_signal(signal).data
    a = np.asarray(coefficients, dtype=float)
    if a.shape != (x.shape[0],) * 2:
        raise DimensionError(f"coefficients must be {x.shape[0]}x{x.shape[0]}, got {a.shape}")
    j = a[None, :, :] * x.T[:, :, None] + a.T[None, :, :] * x.T[:, None, :]
    i = np.arange(x.shape[0])
    j[:, i, i] = 0.0
    return j


def linear_edge_operator(graph: WeightedGraph, coefficients) -> np.ndarray:
    """Matrix ``M`` with ``M_ii = sum_j a_ij w_ij`` and ``M_ij = a_ji w_ij`` off the diagonal."""
    w = as_graph(graph).weights
    a = np.asarray(coefficients, dtype=float)
    m = a.T * w
    np.fill_diagonal(m, (a * w).sum(axis=1))
    return m


def proposition1_equivalence_check(
    graph: WeightedGraph, signal: MultivariateSignal, coefficients, atol: float = 1e-9
) -> bool:
    """Check ``M X == W <> J`` for the linear pair function with coefficients ``a``.

    ``M`` is :func:`linear_edge_operator` and ``J`` is :func:`linear_pair_tensor`.
    """
    graph = as_graph(graph)
    signal = as_signal(signal)
    if graph.n != signal.n:
        raise DimensionError(f"graph has {graph.n} nodes, signal has {signal.n}")
    lhs = linear_edge_operator(graph, coefficients) @ signal.data
    rhs = signal_product(graph, linear_pair_tensor(signal, coefficients))
    return bool(np.allclose(lhs, rhs, rtol=0.0, atol=atol))
