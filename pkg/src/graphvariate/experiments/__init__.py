"""Simulation experiments: correlated AR sources, spheroid detection, moment check."""

from .ar import ArModel, ar2_generate, correlated_source_experiment, correlated_source_grid
from .moments import MomentCheck, triple_product_moment_check
from .rng import derive_rng
from .spheroid import GridWorld, spheroid_detect, spheroid_experiment, spheroid_generate
from .stats import TTestResult, one_sample_ttest, paired_ttest, sign_test

__all__ = [
    "ArModel",
    "GridWorld",
    "MomentCheck",
    "TTestResult",
    "ar2_generate",
    "correlated_source_experiment",
    "correlated_source_grid",
    "derive_rng",
    "one_sample_ttest",
    "paired_ttest",
    "sign_test",
    "spheroid_detect",
    "spheroid_experiment",
    "spheroid_generate",
    "triple_product_moment_check",
]
