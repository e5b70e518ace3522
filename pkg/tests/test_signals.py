import numpy as np
import pytest

from graphvariate.signals import (
    DimensionError,
    GraphVariateSignal,
    InstantaneousNetworkTensor,
    MultivariateSignal,
    NodeFunctionKind,
    WeightedGraph,
    canonical_tag,
    check_epoch,
    node_subset,
)


def test_signal_shape_and_readonly():
    s = MultivariateSignal(np.arange(10.0).reshape(2, 5), sample_rate=100.0)
    assert (s.n, s.p) == (2, 5)
    with pytest.raises(ValueError):
        s.data[0, 0] = 1.0


@pytest.mark.parametrize(
    "data",
    [np.zeros((1, 5)), np.zeros((3, 1)), np.zeros(5), np.array([[0.0, np.nan], [1.0, 2.0]])],
)
def test_signal_rejects_bad_data(data):
    with pytest.raises(ValueError):
        MultivariateSignal(data)


def test_signal_rejects_bad_rate_and_labels():
    with pytest.raises(ValueError):
        MultivariateSignal(np.zeros((2, 3)), sample_rate=0.0)
    with pytest.raises(ValueError):
        MultivariateSignal(np.zeros((2, 3)), node_labels=["a"])


def test_epoch_forms():
    assert check_epoch(None, 10) == (0, 10)
    assert check_epoch((2, 7), 10) == (2, 7)
    assert check_epoch(slice(3, None), 10) == (3, 10)
    with pytest.raises(IndexError):
        check_epoch((5, 20), 10)
    with pytest.raises(ValueError):
        check_epoch((4, 5), 10, min_length=3)


def test_graph_invariants():
    w = np.array([[0, 0.5], [0.5, 0]])
    g = WeightedGraph(w, "coherence")
    assert g.n == 2
    np.testing.assert_array_equal(g.laplacian(), [[0.5, -0.5], [-0.5, 0.5]])
    with pytest.raises(ValueError, match="symmetric"):
        WeightedGraph(np.array([[0, 1.0], [0.5, 0]]))
    with pytest.raises(ValueError, match="diagonal"):
        WeightedGraph(np.eye(2))
    with pytest.raises(ValueError):
        WeightedGraph(np.array([[0, -0.2], [-0.2, 0]]), "pli")
    with pytest.raises(ValueError):
        WeightedGraph(np.array([[0, 1.5], [1.5, 0]]), "correlation")
    with pytest.raises(ValueError):
        WeightedGraph(w, "directed")


def test_graph_variate_signal_needs_matching_nodes():
    s = MultivariateSignal(np.zeros((3, 4)))
    with pytest.raises(DimensionError):
        GraphVariateSignal(s, WeightedGraph(np.zeros((2, 2))))
    GraphVariateSignal(s, WeightedGraph(np.zeros((3, 3))))


def test_tensor_requires_zero_diagonal():
    t = InstantaneousNetworkTensor(np.zeros((4, 3, 3)))
    assert (t.p, t.n) == (4, 3)
    assert len(list(t)) == 4
    bad = np.zeros((2, 3, 3))
    bad[1, 2, 2] = 1.0
    with pytest.raises(ValueError):
        InstantaneousNetworkTensor(bad)


def test_node_function_kind_checks():
    assert canonical_tag("ico") == "instantaneous_correlation"
    with pytest.raises(ValueError):
        canonical_tag("coherence")
    with pytest.raises(ValueError, match="means"):
        NodeFunctionKind("instantaneous_correlation")
    k = NodeFunctionKind("ico", means=np.zeros(3))
    with pytest.raises(DimensionError):
        k.check_dimensions(4, 10)
    assert not NodeFunctionKind("phs", phase=np.zeros((2, 2))).symmetric


def test_node_subset():
    np.testing.assert_array_equal(node_subset([2, 0], 3), [0, 2])
    with pytest.raises(ValueError):
        node_subset([], 3)
    with pytest.raises((ValueError, IndexError)):
        node_subset([3], 3)
