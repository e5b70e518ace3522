"""Student t-tests and multiple-comparison summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special, stats


@dataclass(frozen=True)
class TTestResult:
    """Two-sided one-sample t-test against a zero mean.

    A ``degenerate`` result (zero sample variance) has ``nan`` statistic and
    p-value unless the mean is exactly zero, in which case ``t = 0, p = 1``.
    """

    statistic: float
    p_value: float
    dof: int
    mean: float
    degenerate: bool = False

    def significant(self, alpha: float = 0.05) -> bool:
        return (not self.degenerate) and self.p_value < alpha


def t_two_sided_p(t: float, dof: int) -> float:
    """``P(|T| >= |t|)`` for ``dof`` degrees of freedom via the regularized incomplete beta."""
    return float(special.betainc(0.5 * dof, 0.5, dof / (dof + t * t)))


def one_sample_ttest(values, popmean: float = 0.0) -> TTestResult:
    x = np.asarray(values, dtype=float).ravel() - popmean
    if x.size < 2:
        raise ValueError("t-test needs at least two values")
    dof = x.size - 1
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if mean == 0.0:
        return TTestResult(0.0, 1.0, dof, mean, degenerate=sd == 0)
    if sd == 0 or not np.isfinite(sd):
        return TTestResult(float("nan"), float("nan"), dof, mean, degenerate=True)
    t = mean / (sd / np.sqrt(x.size))
    return TTestResult(float(t), t_two_sided_p(t, dof), dof, mean)


def paired_ttest(a, b) -> TTestResult:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"paired samples differ in shape: {a.shape} vs {b.shape}")
    return one_sample_ttest(a - b)


def sign_test(wins: int, losses: int) -> float:
    """One-sided binomial sign test p-value for ``wins`` out of ``wins + losses`` (ties dropped)."""
    n = wins + losses
    if n == 0:
        return 1.0
    return float(stats.binomtest(wins, n, 0.5, alternative="greater").pvalue)


def significance_density(p_values, alpha: float = 0.05) -> tuple[float, float]:
    """Fraction of significant p-values, uncorrected and Bonferroni-corrected."""
    p = np.asarray(p_values, dtype=float).ravel()
    p = p[np.isfinite(p)]
    if p.size == 0:
        return 0.0, 0.0
    return float(np.mean(p < alpha)), float(np.mean(p < alpha / p.size))
