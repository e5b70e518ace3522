import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from graphvariate.core import (
    column_signal_product,
    dirichlet_energy,
    graph_weighted_tensor,
    iter_graph_weighted_slices,
    linear_edge_operator,
    linear_pair_tensor,
    local_clustering,
    node_function_row_sums,
    node_function_tensor,
    node_normalize,
    proposition1_equivalence_check,
    signal_product,
)
from graphvariate.signals import (
    DimensionError,
    InstantaneousNetworkTensor,
    MultivariateSignal,
    NodeFunctionKind,
    WeightedGraph,
)


def _kind(tag, x, rng=None):
    if tag == "instantaneous_correlation":
        return NodeFunctionKind(tag, means=x.mean(axis=1))
    if tag == "phase_sign":
        return NodeFunctionKind(tag, phase=rng.uniform(-np.pi, np.pi, size=x.shape))
    return NodeFunctionKind(tag)


# oracles first ---------------------------------------------------------------


@pytest.mark.parametrize("tag", ["squared_difference", "instantaneous_correlation", "pair_average", "phase_sign"])
def test_node_function_tensor_matches_double_loop(rng, tag):
    x = rng.normal(size=(4, 50))
    kind = _kind(tag, x, rng)
    got = node_function_tensor(MultivariateSignal(x), kind).slices
    if tag == "squared_difference":
        src = oracles.normalize_columns(x)
    elif tag == "phase_sign":
        src = kind.phase
    else:
        src = x
    want = oracles.node_function_tensor(src, tag, means=x.mean(axis=1))
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-12)


def test_envelope_kinds_use_envelope(rng):
    x = rng.normal(size=(3, 20))
    env = rng.uniform(0, 2, size=x.shape)
    sq = node_function_tensor(MultivariateSignal(x), NodeFunctionKind("env_sqd", envelope=env)).slices
    np.testing.assert_allclose(sq, oracles.node_function_tensor(env, "squared_difference"), atol=1e-12)
    m = env.mean(axis=1)
    ico = node_function_tensor(
        MultivariateSignal(x), NodeFunctionKind("env_ico", envelope=env, envelope_means=m)
    ).slices
    np.testing.assert_allclose(
        ico, oracles.node_function_tensor(env, "instantaneous_correlation", means=m), atol=1e-12
    )


def test_local_clustering_matches_triple_loop(rng):
    for _ in range(20):
        n = int(rng.integers(2, 11))
        d = rng.normal(size=(3, n, n))
        d = d + d.transpose(0, 2, 1)
        d[:, np.arange(n), np.arange(n)] = 0
        np.testing.assert_allclose(local_clustering(d), oracles.local_clustering(d), atol=1e-10)


def test_graph_weighted_tensor_matches_loop(rng):
    w = oracles.random_graph(rng, 5)
    j = rng.normal(size=(20, 5, 5))
    j[:, np.arange(5), np.arange(5)] = 0
    got = graph_weighted_tensor(WeightedGraph(w), j).slices
    want = np.zeros_like(j)
    for t in range(20):
        for a in range(5):
            for b in range(5):
                want[t, a, b] = w[a, b] * j[t, a, b]
    np.testing.assert_allclose(got, want, atol=1e-12)


@pytest.mark.parametrize("tag", ["squared_difference", "instantaneous_correlation", "pair_average", "phase_sign"])
def test_row_sums_match_oracle(rng, tag):
    x = rng.normal(size=(7, 30))
    w = oracles.random_graph(rng, 7, "correlation")
    kind = _kind(tag, x, rng)
    got = node_function_row_sums(WeightedGraph(w, "correlation"), MultivariateSignal(x), kind, chunk=8)
    j = node_function_tensor(MultivariateSignal(x), kind).slices
    np.testing.assert_allclose(got, oracles.weighted_row_sums(w, j), atol=1e-10)


# worked examples ---------------------------------------------------------------


def test_squared_difference_two_nodes():
    from graphvariate.core import _pairwise

    # the pair function evaluated on normalised values (1, -1)
    assert _pairwise("squared_difference", np.array([[1.0, -1.0]]))[0, 0, 1] == 4.0
    # two nodes always normalise to +-1/sqrt(2), so their squared difference is 2
    x = np.array([[3.0, 2.0], [-1.0, 7.0]])
    j = node_function_tensor(MultivariateSignal(x), NodeFunctionKind("sqd")).slices
    np.testing.assert_allclose(j[:, 0, 1], [2.0, 2.0])


def test_phase_sign_equal_phases_zero():
    phi = np.tile([[0.3], [0.3], [1.0]], (1, 5))
    j = node_function_tensor(MultivariateSignal(np.zeros((3, 5))), NodeFunctionKind("phs", phase=phi)).slices
    assert np.all(j[:, 0, 1] == 0)
    assert np.all(j[:, 0, 2] == -1)


def test_node_normalize_examples(rng):
    out = node_normalize(MultivariateSignal(np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]))).data
    np.testing.assert_allclose(out[:, 0], [-1, 0, 1])
    np.testing.assert_array_equal(out[:, 1], [0, 0, 0])
    out = node_normalize(MultivariateSignal(rng.normal(3, 2, size=(6, 100)))).data
    assert np.abs(out.mean(axis=0)).max() < 1e-12
    np.testing.assert_allclose(out.std(axis=0, ddof=1), 1.0, atol=1e-12)


def test_weighting_masks():
    j = np.ones((4, 3, 3))
    j[:, np.arange(3), np.arange(3)] = 0
    assert not graph_weighted_tensor(WeightedGraph(np.zeros((3, 3))), j).slices.any()
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = 1.0
    d = graph_weighted_tensor(WeightedGraph(w), j).slices
    nz = {tuple(ix[1:]) for ix in np.argwhere(d)}
    assert nz == {(0, 1), (1, 0)}
    with pytest.raises(DimensionError):
        graph_weighted_tensor(WeightedGraph(np.zeros((2, 2))), j)


def test_signal_product_identities(rng):
    x = rng.integers(-5, 6, size=(6, 12)).astype(float)
    w = rng.integers(0, 4, size=(6, 6)).astype(float)
    w = np.triu(w, 1) + np.triu(w, 1).T
    g = WeightedGraph(w)
    j_xj = np.broadcast_to(x.T[:, None, :], (12, 6, 6)).copy()
    j_xj[:, np.arange(6), np.arange(6)] = 0
    np.testing.assert_array_equal(signal_product(g, j_xj), w @ x)
    j_diff = x.T[:, :, None] - x.T[:, None, :]
    lap = np.diag(w.sum(axis=1)) - w
    np.testing.assert_allclose(signal_product(g, j_diff), lap @ x, atol=1e-10)
    assert not signal_product(WeightedGraph(np.zeros((6, 6))), j_diff).any()


def test_column_product_differs_by_sign_on_antisymmetric(rng):
    w = oracles.random_graph(rng, 5)
    phi = rng.uniform(-np.pi, np.pi, size=(5, 9))
    j = node_function_tensor(MultivariateSignal(np.zeros((5, 9))), NodeFunctionKind("phs", phase=phi))
    np.testing.assert_allclose(column_signal_product(WeightedGraph(w), j), -signal_product(WeightedGraph(w), j))
    j2 = node_function_tensor(MultivariateSignal(phi), NodeFunctionKind("avg"))
    np.testing.assert_allclose(column_signal_product(WeightedGraph(w), j2), signal_product(WeightedGraph(w), j2))


def test_local_clustering_examples(rng):
    assert not local_clustering(np.zeros((2, 4, 4))).any()
    ones = np.ones((1, 3, 3)) - np.eye(3)
    np.testing.assert_array_equal(local_clustering(ones)[:, 0], [2, 2, 2])


def test_local_clustering_streaming_equals_dense(rng):
    x = MultivariateSignal(rng.normal(size=(5, 37)))
    g = WeightedGraph(oracles.random_graph(rng, 5))
    kind = NodeFunctionKind("avg")
    dense = local_clustering(graph_weighted_tensor(g, node_function_tensor(x, kind)))
    streamed = local_clustering(iter_graph_weighted_slices(g, x, kind, chunk=6))
    np.testing.assert_allclose(streamed, dense, atol=1e-12)


def test_dirichlet_energy(rng):
    g = WeightedGraph(np.array([[0, 1.0], [1.0, 0]]))
    assert dirichlet_energy(g, [1.0, -1.0]) == pytest.approx(4.0)
    assert dirichlet_energy(g, [1.0, 1.0]) == 0.0
    w = oracles.random_graph(rng, 8)
    x = rng.normal(size=8)
    lap = np.diag(w.sum(axis=1)) - w
    assert dirichlet_energy(WeightedGraph(w), x) == pytest.approx(x @ lap @ x, abs=1e-10)
    with pytest.raises(DimensionError):
        dirichlet_energy(g, [1.0, 2.0, 3.0])


def test_proposition1_examples(rng):
    x = MultivariateSignal(rng.normal(size=(5, 30)))
    g = WeightedGraph(oracles.random_graph(rng, 5))
    assert proposition1_equivalence_check(g, x, np.zeros((5, 5)))
    assert proposition1_equivalence_check(g, x, np.ones((5, 5)))
    a = np.repeat(np.arange(5.0)[:, None], 5, axis=1)
    assert proposition1_equivalence_check(g, x, a)
    # a wrong operator is caught
    m = linear_edge_operator(g, a)
    assert not np.allclose(m @ x.data, linear_edge_operator(g, a.T) @ x.data)
    assert linear_pair_tensor(x, a).shape == (30, 5, 5)


# properties ---------------------------------------------------------------


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@settings(max_examples=40, deadline=None)
@given(arrays(float, (4, 6), elements=finite), arrays(float, (4, 4), elements=st.floats(0, 1)))
def test_zero_diagonal_and_symmetry_property(x, w):
    w = np.triu(w, 1) + np.triu(w, 1).T
    sig = MultivariateSignal(x)
    for kind in (NodeFunctionKind("sqd"), NodeFunctionKind("ico", means=x.mean(axis=1)), NodeFunctionKind("avg")):
        d = graph_weighted_tensor(WeightedGraph(w), node_function_tensor(sig, kind)).slices
        assert not d[:, np.arange(4), np.arange(4)].any()
        np.testing.assert_array_equal(d, d.transpose(0, 2, 1))
    ph = NodeFunctionKind("phs", phase=np.angle(np.exp(1j * x)))
    d = graph_weighted_tensor(WeightedGraph(w), node_function_tensor(sig, ph)).slices
    np.testing.assert_array_equal(d, -d.transpose(0, 2, 1))
    assert np.abs(d.sum(axis=(1, 2))).max() < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_proposition1_property(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(2, 8))
    x = MultivariateSignal(r.normal(size=(n, 10)))
    g = WeightedGraph(oracles.random_graph(r, n))
    assert proposition1_equivalence_check(g, x, r.normal(size=(n, n)))
