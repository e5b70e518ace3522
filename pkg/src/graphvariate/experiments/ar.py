"""Correlated-source detection with AR(2) realisations.

Two multivariate signals are built from the same ``2h`` realisations: the
uncorrelated set averages consecutive disjoint pairs, the correlated set
replaces the first signal with the average of realisations 1 and 3 so it
shares a component with signal 2.  Each population member contributes the
difference (correlated - uncorrelated) of a summed statistic, and a one-sample
t-test asks whether that difference has zero mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import signal as sps

from ..connectivity import correlation_matrix, gvd, prepare_node_function
from ..signals import MultivariateSignal
from .rng import derive_rng
from .stats import TTestResult, one_sample_ttest, sign_test

METHODS = ("raw", "squared_difference", "instantaneous_correlation")
FULL_GRID_SIZES = (2, 4, 8, 16, 32, 64, 128, 256, 512)
FULL_GRID_POPULATIONS = tuple(range(5, 55, 5))


@dataclass(frozen=True)
class ArModel:
    """``z(t) = c0 + phi1 z(t-1) + phi2 z(t-2) + eps`` with Gaussian ``eps``.

    The default noise level reads the second parameter of N(0, 0.1) as a
    standard deviation (``noise_variance = 0.01``); the detection statistics
    are invariant to this scale.
    """

    c0: float = 0.5
    phi1: float = 0.7
    phi2: float = 0.25
    noise_variance: float = 0.01
    burn_in: int = 200
    seed: int = 0

    def __post_init__(self):
        if not self.phi1 + self.phi2 < 1:
            raise ValueError("phi1 + phi2 must be < 1 for a stationary mean")
        if self.noise_variance < 0 or self.burn_in < 0:
            raise ValueError("noise_variance and burn_in must be non-negative")

    @property
    def fixed_point(self) -> float:
        return self.c0 / (1.0 - self.phi1 - self.phi2)


def ar2_generate_many(
    model: ArModel, count: int, length: int, rng: np.random.Generator
) -> np.ndarray:
    """``count`` independent realisations, shape (count, length).

    The recursion starts at the fixed point and discards ``burn_in`` samples.
    """
    if length < 2:
        raise ValueError("length must be at least 2")
    total = model.burn_in + length
    eps = rng.normal(0.0, np.sqrt(model.noise_variance), size=(count, total))
    a = [1.0, -model.phi1, -model.phi2]
    zi = sps.lfiltic([1.0], a, y=[model.fixed_point, model.fixed_point])
    z, _ = sps.lfilter([1.0], a, model.c0 + eps, axis=1, zi=np.tile(zi, (count, 1)))
    return z[:, model.burn_in :]


def ar2_generate(model: ArModel, length: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """One realisation of ``length`` samples (seeded from ``model.seed`` by default)."""
    if rng is None:
        rng = np.random.default_rng(model.seed)
    return ar2_generate_many(model, 1, length, rng)[0]


def correlated_source_sets(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Uncorrelated and correlated signals, each (h, p), from ``2h`` realisations."""
    if z.shape[0] % 2 or z.shape[0] < 4:
        raise ValueError("need an even number (>= 4) of realisations")
    unc = 0.5 * (z[0::2] + z[1::2])
    cor = unc.copy()
    cor[0] = 0.5 * (z[0] + z[2])
    return unc, cor


def three_node_example(z: np.ndarray) -> np.ndarray:
    """Signals ``x1 = (z1+z2)/2, x2 = (z1+z3)/2, x3 = (z4+z5)/2`` from five realisations."""
    return 0.5 * np.vstack([z[0] + z[1], z[0] + z[2], z[3] + z[4]])


def method_statistics(x: np.ndarray) -> dict[str, float]:
    """Summed raw signal and summed node GVD connectivity (correlation graph) per method."""
    sig = MultivariateSignal(x)
    graph = correlation_matrix(sig)
    out = {"raw": float(x.sum())}
    for tag in METHODS[1:]:
        kind = prepare_node_function(tag, sig)
        out[tag] = float(gvd(sig, graph, kind).node_values.sum())
    return out


def member_differences(
    h: int, rng: np.random.Generator, model: ArModel = ArModel(), length: int = 1000
) -> dict[str, float]:
    """Correlated-minus-uncorrelated statistics for one population member."""
    z = ar2_generate_many(model, 2 * h, length, rng)
    unc, cor = correlated_source_sets(z)
    su, sc = method_statistics(unc), method_statistics(cor)
    return {m: sc[m] - su[m] for m in METHODS}


@dataclass
class CorrelatedSourceResult:
    h: int
    population: int
    differences: dict[str, np.ndarray]
    tests: dict[str, TTestResult] = field(default_factory=dict)


def correlated_source_experiment(
    h: int,
    population: int,
    seed: int = 0,
    model: ArModel = ArModel(),
    length: int = 1000,
    repetition: int = 0,
) -> CorrelatedSourceResult:
    """Run one population and t-test each method's differences against zero.

    Member ``m`` draws from ``derive_rng(seed, "ar-detect", h, population, repetition, m)``.
    """
    if h < 2 or h % 2:
        raise ValueError(f"signal size must be an even number >= 2, got {h}")
    if population < 2:
        raise ValueError("population must have at least 2 members")
    diffs = {m: np.empty(population) for m in METHODS}
    for member in range(population):
        rng = derive_rng(seed, "ar-detect", h, population, repetition, member)
        d = member_differences(h, rng, model, length)
        for m in METHODS:
            diffs[m][member] = d[m]
    tests = {m: one_sample_ttest(diffs[m]) for m in METHODS}
    return CorrelatedSourceResult(h, population, diffs, tests)


def correlated_source_grid(
    sizes=FULL_GRID_SIZES,
    populations=FULL_GRID_POPULATIONS,
    seed: int = 0,
    repetition: int = 0,
    model: ArModel = ArModel(),
    length: int = 1000,
) -> dict[str, np.ndarray]:
    """p-value grid per method, shape (len(populations), len(sizes))."""
    grid = {m: np.empty((len(populations), len(sizes))) for m in METHODS}
    for c, h in enumerate(sizes):
        for r, pop in enumerate(populations):
            res = correlated_source_experiment(h, pop, seed, model, length, repetition)
            for m in METHODS:
                grid[m][r, c] = res.tests[m].p_value
    return grid


def dominance_sign_test(better: np.ndarray, worse: np.ndarray) -> tuple[int, int, float]:
    """Cells where ``better`` has the smaller p-value vs the reverse; ties are dropped."""
    b = np.asarray(better).ravel()
    w = np.asarray(worse).ravel()
    wins = int(np.sum(b < w))
    losses = int(np.sum(b > w))
    return wins, losses, sign_test(wins, losses)
