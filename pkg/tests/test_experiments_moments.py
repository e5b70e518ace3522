import numpy as np
import pytest

from graphvariate.experiments.moments import (
    printed_closed_form,
    printed_expansion,
    raw_moment_expansion,
    triple_product_moment_check,
)


def test_zero_delta_has_zero_mean():
    res = triple_product_moment_check(0.0, 0.3, 100_000, seed=1)
    assert res.theoretical == 0.0 and res.closed_form == 0.0
    assert res.agrees()


def test_deterministic_case_reconciles():
    # with sigma = 0 every factor is 2 delta
    for d in (0.3, 0.5, 1.0):
        assert raw_moment_expansion(d, 0.0) == pytest.approx(8 * d**3)
        res = triple_product_moment_check(d, 0.0, 10_000)
        assert res.empirical == pytest.approx(8 * d**3)
        assert res.agrees()
    # neither printed form gives 8 delta^3 at sigma = 0
    assert printed_closed_form(0.5, 0.0) == pytest.approx(5.0)
    assert printed_expansion(0.5, 0.0) == pytest.approx(6.0)


def test_expansion_against_brute_force_enumeration():
    # exact expectation for a discrete symmetric law (X = delta +- s) by enumeration
    delta, s = 0.4, 0.2
    vals = np.array([delta - s, delta + s])
    tot = 0.0
    for a in vals:
        for b in vals:
            for c in vals:
                tot += (a + b) * (b + c) * (c + a) / 8
    assert tot == pytest.approx(raw_moment_expansion(delta, s))


def test_monte_carlo_matches_expansion():
    res = triple_product_moment_check(0.5, 0.3, 200_000, seed=2)
    assert abs(res.z_score()) < 4
    assert res.printed_expansion != pytest.approx(res.theoretical)
    assert res.closed_form == pytest.approx(6.08)


def test_check_validation():
    with pytest.raises(ValueError):
        triple_product_moment_check(0.1, 0.1, 100)
    with pytest.raises(ValueError):
        triple_product_moment_check(0.1, -0.1)
