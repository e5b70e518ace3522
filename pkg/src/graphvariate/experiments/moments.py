"""Mean of the pair-average triangle product ``(x_i+x_j)(x_j+x_k)(x_k+x_i)``.

This is the per-triangle contribution to ``diag(Delta^3)`` (up to the
``1/8`` and weights) when all three nodes sit inside the spheroid.  For
i.i.d. ``X`` the expansion has six ``X_a^2 X_b`` terms and two ``X_i X_j X_k``
terms, so the mean is ``6 E[X] E[X^2] + 2 E[X]^3``; with
``X ~ N(delta, sigma^2)`` that is ``6 delta sigma^2 + 8 delta^3``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import derive_rng


def raw_moment_expansion(delta: float, sigma: float) -> float:
    m1 = delta
    m2 = sigma**2 + delta**2
    return 6.0 * m1 * m2 + 2.0 * m1**3


def printed_closed_form(delta: float, sigma: float) -> float:
    """``24 sigma^2 delta + 40 delta^3``, kept for comparison only."""
    return 24.0 * sigma**2 * delta + 40.0 * delta**3


def printed_expansion(delta: float, sigma: float) -> float:
    """``8 (mu_3 + 3 E[X] E[X^2] + 2 E[X]^3)`` with ``mu_3 = E[X^3]``, kept for comparison only."""
    m1 = delta
    m2 = sigma**2 + delta**2
    m3 = delta**3 + 3.0 * delta * sigma**2
    return 8.0 * (m3 + 3.0 * m1 * m2 + 2.0 * m1**3)


@dataclass(frozen=True)
class MomentCheck:
    delta: float
    sigma: float
    samples: int
    empirical: float
    standard_error: float
    theoretical: float
    closed_form: float
    printed_expansion: float

    def z_score(self, value: float | None = None) -> float:
        """Distance of ``value`` (default: the raw-moment mean) from the empirical mean, in standard errors."""
        target = self.theoretical if value is None else value
        diff = self.empirical - target
        # sigma = 0 leaves only rounding differences
        if abs(diff) <= 1e-12 * max(1.0, abs(target)):
            return 0.0
        if self.standard_error == 0:
            return float("inf")
        return diff / self.standard_error

    def agrees(self, tolerance_se: float = 4.0) -> bool:
        return abs(self.z_score()) <= tolerance_se

    @property
    def closed_form_discrepancy(self) -> float:
        return self.empirical - self.closed_form


def triple_product_moment_check(
    delta: float, sigma: float, samples: int = 100_000, seed: int = 0
) -> MomentCheck:
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    rng = derive_rng(seed, "moments", int(round(1000 * delta)), int(round(1000 * sigma)))
    x = rng.normal(delta, sigma, size=(3, samples))
    prod = (x[0] + x[1]) * (x[1] + x[2]) * (x[2] + x[0])
    return MomentCheck(
        delta=float(delta),
        sigma=float(sigma),
        samples=int(samples),
        empirical=float(prod.mean()),
        standard_error=float(prod.std(ddof=1) / np.sqrt(samples)),
        theoretical=raw_moment_expansion(delta, sigma),
        closed_form=printed_closed_form(delta, sigma),
        printed_expansion=printed_expansion(delta, sigma),
    )
