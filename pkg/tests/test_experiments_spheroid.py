import numpy as np
import pytest
from scipy import stats

from graphvariate.experiments.spheroid import (
    DETECTORS,
    GridWorld,
    detector_scores,
    grid_pair_average_clustering,
    spheroid_detect,
    spheroid_experiment,
    spheroid_generate,
)


@pytest.fixture(scope="module")
def world():
    return GridWorld()


@pytest.fixture(scope="module")
def small_world():
    return GridWorld((4, 5, 3))


def test_grid_weights_and_neighbours(world):
    pos = world.node_positions
    i, j = 123, 871
    d2 = ((pos[i] - pos[j]) ** 2).sum()
    assert world.graph.weights[i, j] == pytest.approx(np.exp(-d2 / 4), abs=1e-12)
    w = world.graph.weights
    rng = np.random.default_rng(0)
    for a, b in rng.integers(0, world.n, size=(50, 2)):
        want = 0.0 if a == b else np.exp(-((pos[a] - pos[b]) ** 2).sum() / 4)
        assert abs(w[a, b] - want) < 1e-12
    interior = np.all((pos > 0) & (pos < 9), axis=1)
    counts = np.array([len(nb) for nb in world.neighbor_lists])
    assert np.all(counts[interior] == 6)
    assert counts.min() == 3


def test_walk_stays_on_grid(world):
    tr = spheroid_generate(world, 0.4, 500, seed=2)
    steps = world.node_positions[tr.centers[1:]] - world.node_positions[tr.centers[:-1]]
    assert np.all(np.abs(steps).sum(axis=1) == 1)
    assert tr.centers.min() >= 0 and tr.centers.max() < world.n


def test_bump_bookkeeping(world):
    delta = 0.7
    tr = spheroid_generate(world, delta, 300, seed=4)
    added = tr.signal.data - tr.background
    t = np.arange(300)
    np.testing.assert_allclose(added[tr.centers, t], delta, atol=1e-15)
    for k in range(0, 300, 37):
        c = tr.centers[k]
        nz = np.flatnonzero(np.abs(added[:, k]) > 1e-12)
        assert set(nz) == {c, *world.neighbor_lists[c]}
        np.testing.assert_allclose(added[world.neighbor_lists[c], k], 0.75 * delta, atol=1e-15)
    zero = spheroid_generate(world, 0.0, 50, seed=4)
    np.testing.assert_array_equal(zero.signal.data, zero.background)
    with pytest.raises(ValueError):
        spheroid_generate(world, -1.0)


def test_fast_clustering_matches_dense(small_world):
    tr = spheroid_generate(small_world, 0.5, 40, seed=1)
    fast = detector_scores(tr, small_world, fast=True)["C_loc"]
    dense = detector_scores(tr, small_world, fast=False)["C_loc"]
    np.testing.assert_allclose(fast, dense, rtol=1e-12, atol=1e-12)
    x = np.random.default_rng(5).normal(size=(small_world.n, 7))
    np.testing.assert_allclose(
        grid_pair_average_clustering(small_world, x, chunk=3),
        grid_pair_average_clustering(small_world, x, chunk=100),
        atol=1e-12,
    )


def test_detection_is_deterministic(small_world):
    a = spheroid_experiment((0.5,), replicates=2, length=60, seed=9, world=small_world)
    b = spheroid_experiment((0.5,), replicates=2, length=60, seed=9, world=small_world)
    np.testing.assert_array_equal(a.counts, b.counts)
    assert a.counts.shape == (1, 2, len(a.detectors), 2)
    assert np.all(a.counts[..., 0] <= a.counts[..., 1])


def test_large_delta_found_by_local_detectors(world):
    tr = spheroid_generate(world, 100.0, 200, seed=0)
    pct = spheroid_detect(tr, world).percentages()
    for name in ("max", "C_loc", "W_hat"):
        assert pct[name][0] > 99.0


def test_centred_bump_and_heat_kernel_bias(world):
    c = int(np.ravel_multi_index((5, 5, 5), world.dims))
    x = np.zeros(world.n)
    x[c] = 1.0
    x[world.neighbor_lists[c]] = 0.75
    ops = world.operators
    for name in ("W_hat", "W_hat^3", "L", "L^3"):
        assert np.argmax(ops[name].matrix @ x) == c
    # the heat kernels smooth almost to a constant and peak far from the bump
    for name in ("exp(-L)", "exp(-3L)"):
        assert np.argmax(ops[name].matrix @ x) != c


def test_no_signal_centre_rate_is_chance(world):
    hits = 0
    total = 0
    for rep in range(5):
        tr = spheroid_generate(world, 0.0, 1000, seed=0, replicate=rep)
        table = spheroid_detect(tr, world)
        hits += table.centre_hits[DETECTORS.index("max")]
        total += table.samples
    assert stats.binomtest(int(hits), total, 1 / world.n).pvalue > 0.001
