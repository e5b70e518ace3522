import numpy as np
import pytest

from graphvariate import MultivariateSignal, WeightedGraph

from oracles import random_graph


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def small_instance(rng):
    x = rng.normal(size=(6, 40))
    return MultivariateSignal(x), WeightedGraph(random_graph(rng, 6))
