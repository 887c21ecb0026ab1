"""Special-function accuracy against independent oracles.

The Q-function oracle is direct numerical quadrature of the Gaussian tail;
scaled_mills is checked against the asymptotic Mills-ratio expansion and
the direct product at moderate arguments; the chi-square CDF against the
closed-form Erlang sum and high-precision values.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from pilotgate import chi_square_cdf, chi_square_sf, q_function, scaled_mills
from pilotgate.special import SQRT_2PI, log_q_function, log_scaled_mills


def q_quadrature(x: float) -> float:
    """Oracle: integrate the standard normal density over [x, inf).

    Negative arguments go through the symmetry Q(x) = 1 - Q(-x); the upper
    limit is truncated at x + 50, beyond which the remaining mass is below
    1e-300 relative, so finite-interval quadrature reaches ~1e-13 relative.
    """
    if x < 0:
        return 1.0 - q_quadrature(-x)
    val, err = quad(
        lambda t: math.exp(-0.5 * t * t) / SQRT_2PI, x, x + 50.0,
        epsabs=0.0, epsrel=1e-13, limit=300,
    )
    assert err <= 1e-12 * val
    return val


def mills_asymptotic(x: float) -> float:
    """Oracle: Mills-ratio expansion Q(x) e^{x^2/2} ~ (1 - 1/x^2 + 3/x^4 - 15/x^6)/(x sqrt(2 pi))."""
    return (1.0 - 1.0 / x**2 + 3.0 / x**4 - 15.0 / x**6) / (x * SQRT_2PI)


def erlang_cdf(k: int, x: float) -> float:
    """Oracle: chi-square with 2k dof is Erlang(k, mean 2): 1 - e^{-x/2} sum (x/2)^j / j!."""
    s = sum((0.5 * x) ** j / math.factorial(j) for j in range(k))
    return 1.0 - math.exp(-0.5 * x) * s


def test_q_at_zero_exact():
    assert q_function(0.0) == 0.5


def test_q_far_tail_underflows_to_zero():
    assert q_function(40.0) < 1e-300


def test_q_frozen_value():
    # quadrature oracle gives 0.15865525393145705 at x = 1
    assert q_function(1.0) == pytest.approx(0.15865525393145705, abs=1e-16)
    assert q_function(1.0) == pytest.approx(q_quadrature(1.0), rel=1e-12)


@pytest.mark.parametrize("x", [-8.0, -5.0, -2.5, -1.0, -0.3, 0.2, 1.0, 2.7, 4.0, 6.5, 8.0])
def test_q_matches_quadrature_relative(x):
    assert q_function(x) == pytest.approx(q_quadrature(x), rel=1e-12)


@pytest.mark.parametrize("x", [10.0, 15.0, 25.0, 37.0])
def test_q_deep_tail_absolute(x):
    assert abs(q_function(x) - q_quadrature(x)) <= 1e-15


def test_q_symmetry_partition():
    rng = np.random.default_rng(7)
    for x in rng.uniform(-10, 10, size=200):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-12)


def test_q_monotone_nonincreasing():
    xs = np.linspace(-12, 12, 400)
    qs = [q_function(x) for x in xs]
    assert all(a >= b for a, b in zip(qs, qs[1:]))


def test_q_rejects_nonfinite():
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(ValueError):
            q_function(bad)


def test_scaled_mills_at_zero():
    assert scaled_mills(0.0) == pytest.approx(0.5, abs=1e-15)


def test_scaled_mills_matches_asymptotic_oracle():
    assert scaled_mills(10.0) == pytest.approx(1.0 / (10.0 * SQRT_2PI), rel=0.02)
    assert scaled_mills(10.0) == pytest.approx(mills_asymptotic(10.0), rel=2e-6)


def test_scaled_mills_direct_product_moderate():
    # at x = -3 the naive product is still safe and must agree exactly-ish;
    # 89.89561735216625 from 40-digit arithmetic
    assert scaled_mills(-3.0) == pytest.approx(q_function(-3.0) * math.exp(4.5), rel=1e-13)
    assert scaled_mills(-3.0) == pytest.approx(89.89561735216625, rel=1e-13)


def test_scaled_mills_no_overflow_out_to_40():
    assert math.isfinite(scaled_mills(40.0))
    assert scaled_mills(40.0) > 0.0
    assert math.isfinite(scaled_mills(-37.0))  # ~1e298, near the top of double range


def test_scaled_mills_consistency_with_q():
    for x in np.linspace(-5, 5, 101):
        assert scaled_mills(x) * math.exp(-0.5 * x * x) == pytest.approx(
            q_function(x), rel=1e-10
        )


def test_scaled_mills_tail_bounds():
    # x/((x^2+1) sqrt(2 pi)) < mills(x) < 1/(x sqrt(2 pi)) for x > 0
    for x in np.arange(0.1, 10.01, 0.1):
        m = scaled_mills(x)
        assert x / ((x * x + 1.0) * SQRT_2PI) < m < 1.0 / (x * SQRT_2PI)


def test_log_variants_match_logs():
    for x in (-5.0, -1.0, 0.0, 2.0, 8.0):
        assert log_q_function(x) == pytest.approx(math.log(q_function(x)), rel=1e-12)
        assert log_scaled_mills(x) == pytest.approx(math.log(scaled_mills(x)), rel=1e-12)
    # and stays finite where the plain values cannot be represented
    assert math.isfinite(log_q_function(50.0))
    assert math.isfinite(log_scaled_mills(-50.0))


def test_chi_square_exponential_case():
    # 2 dof is exponential with mean 2
    assert chi_square_cdf(2, 2.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-14)


def test_chi_square_one_dof_from_q():
    # chi2(1) is the square of a standard normal: F(x) = 1 - 2 Q(sqrt(x))
    assert chi_square_cdf(1, 1.0) == pytest.approx(1.0 - 2.0 * q_function(1.0), abs=1e-13)


def test_chi_square_left_endpoint():
    assert chi_square_cdf(4, 0.0) == 0.0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_chi_square_matches_erlang(k):
    for x in np.linspace(0.1, 30.0, 60):
        assert chi_square_cdf(2 * k, x) == pytest.approx(erlang_cdf(k, x), abs=1e-10)


def test_chi_square_monotone_in_x():
    xs = np.linspace(0, 80, 300)
    vals = [chi_square_cdf(7, x) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert all(0.0 <= v <= 1.0 for v in vals)


def test_chi_square_large_dof_absolute_accuracy():
    # 40-digit reference values at m = 20000
    assert abs(chi_square_cdf(20000, 20000.0) - 0.5013298083399552) <= 1e-10
    assert abs(chi_square_cdf(20000, 19800.0) - 0.15865119219356466) <= 1e-10


def test_chi_square_sf_complements_cdf():
    for m, x in ((1, 0.5), (6, 14.0), (501, 430.0)):
        assert chi_square_sf(m, x) == pytest.approx(1.0 - chi_square_cdf(m, x), abs=1e-12)


def test_chi_square_domain_errors():
    with pytest.raises(ValueError):
        chi_square_cdf(0, 1.0)
    with pytest.raises(ValueError):
        chi_square_cdf(3, -0.5)
    with pytest.raises(ValueError):
        chi_square_cdf(3, math.nan)
