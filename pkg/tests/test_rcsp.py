"""Decoding-error series, certified truncation and per-state cost model."""

import math

import numpy as np
import pytest

from pilotgate import (
    ChannelSpec,
    RcspConfig,
    chernoff_ratio,
    chernoff_tail,
    costs_for_channel,
    error_prob,
    expected_data_usage,
    truncation_index,
)
from pilotgate.rcsp import _error_probs


def brute_force_index(gamma, k, epsilon, m_cap=200_000):
    """Oracle: integer scan for the smallest m satisfying both stop criteria."""
    m1 = 1
    while not (1.0 + gamma) * 2.0 ** (-2.0 * k / m1) > 1.0 + 0.5 * gamma:
        m1 += 1
        assert m1 < m_cap
    m2 = 1
    while chernoff_tail(m2, gamma) > epsilon:
        m2 += 1
        assert m2 < m_cap
    return max(m1, m2)


def test_config_validation():
    RcspConfig(128)
    with pytest.raises(ValueError):
        RcspConfig(0)
    with pytest.raises(ValueError):
        RcspConfig(128, epsilon=0.0)
    with pytest.raises(ValueError):
        RcspConfig(128, epsilon=1.0)


def test_error_prob_tiny_argument_is_one():
    # k = 128, m = 1: the argument carries 2^-256 and the CDF is essentially 0
    assert error_prob(1, 1.0, 128) == pytest.approx(1.0, abs=1e-12)


def test_error_prob_large_m_below_chernoff():
    gamma = 1.5
    m = 50 * 128
    p = error_prob(m, gamma, 128)
    assert p < 1e-6
    assert p <= chernoff_ratio(gamma) ** (m / 2.0)


def test_error_prob_chernoff_dominates_past_index():
    for gamma in (0.5, 1.0, 1.5):
        m_hat = truncation_index(gamma, 128)
        ms = np.arange(m_hat + 1, m_hat + 2000)
        probs = _error_probs(ms.astype(float), gamma, 128)
        bound = chernoff_ratio(gamma) ** (ms / 2.0)
        assert np.all(probs <= bound + 1e-15)


def test_error_prob_in_unit_interval():
    rng = np.random.default_rng(4)
    for _ in range(200):
        m = int(rng.integers(1, 5000))
        gamma = rng.uniform(0.05, 20.0)
        k = int(rng.choice([8, 32, 128]))
        p = error_prob(m, gamma, k)
        assert 0.0 <= p <= 1.0


def test_error_prob_trend_past_capacity_point():
    # the curve is not monotone for tiny m (it sits pinned at 1), but from
    # the capacity-style index 2k / log2(1+gamma) onward it only decreases
    for gamma, k in [(1.5, 128), (0.5, 128), (1.0, 32)]:
        m0 = math.ceil(2 * k / math.log2(1.0 + gamma))
        probs = _error_probs(np.arange(m0, m0 + 3000, dtype=float), gamma, k)
        assert np.all(np.diff(probs) <= 1e-15)


def test_error_prob_validation():
    with pytest.raises(ValueError):
        error_prob(0, 1.0, 128)
    with pytest.raises(ValueError):
        error_prob(5, -1.0, 128)
    with pytest.raises(ValueError):
        error_prob(5, 1.0, 0)


def test_chernoff_ratio_value():
    # gamma = 1.5: 1.75 exp(-0.75) ~ 0.8266, strictly inside (0, 1)
    assert chernoff_ratio(1.5) == pytest.approx(1.75 * math.exp(-0.75), rel=1e-15)
    assert 0.0 < chernoff_ratio(1.5) < 1.0


def test_truncation_index_matches_integer_scan():
    for gamma, k, eps in [(1.5, 128, 1e-2), (0.5, 128, 1e-2), (1.0, 32, 1e-2),
                          (3.0, 16, 1e-3), (0.2, 64, 5e-2)]:
        assert truncation_index(gamma, k, eps) == brute_force_index(gamma, k, eps)


def test_truncation_index_slope_criterion_closed_form():
    # gamma = 1.5, k = 128: smallest m with 2.5 * 2^(-256/m) > 1.75
    expected = math.ceil(256.0 * math.log(2.0) / math.log(2.5 / 1.75))
    m_hat = truncation_index(1.5, 128)
    assert expected == 498
    assert m_hat >= expected
    # criterion 1 fails at expected - 1 and holds at expected
    assert not (2.5 * 2.0 ** (-256.0 / (expected - 1)) > 1.75)
    assert 2.5 * 2.0 ** (-256.0 / expected) > 1.75


def test_truncation_index_tail_certified():
    for gamma in (0.5, 1.0, 1.5):
        m_hat = truncation_index(gamma, 128)
        assert chernoff_tail(m_hat, gamma) <= 1e-2
        # and m_hat is minimal for the pair of criteria
        smaller = m_hat - 1
        c1 = (1.0 + gamma) * 2.0 ** (-256.0 / smaller) > 1.0 + 0.5 * gamma
        c2 = chernoff_tail(smaller, gamma) <= 1e-2
        assert not (c1 and c2)


def test_truncation_index_doubling_k():
    # the slope criterion is linear in k, so doubling k essentially doubles
    # the index (exactly here; never off by more than the ceiling)
    m_64 = truncation_index(1.5, 64)
    m_128 = truncation_index(1.5, 128)
    assert m_128 >= 2 * m_64 - 1
    assert (m_64, m_128) == (249, 498)


def test_expected_usage_capacity_floor():
    # at high SNR the transmission ends near the capacity-style floor
    gamma, k = 100.0, 8
    floor = 2.0 * k / math.log2(1.0 + gamma)
    val = expected_data_usage(gamma, k)
    assert floor < val <= 1.25 * floor


def test_expected_usage_decreasing_in_snr():
    vals = [expected_data_usage(g, 128) for g in (0.1, 0.3, 0.5, 1.0, 1.5, 3.0, 10.0)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert expected_data_usage(0.5, 128) > expected_data_usage(1.5, 128)


def test_expected_usage_epsilon_budget():
    # halving the budget moves the value by no more than the budget itself
    a = expected_data_usage(1.5, 128, 1e-2)
    b = expected_data_usage(1.5, 128, 5e-3)
    assert abs(a - b) <= 1e-2


def test_direct_tail_within_budget():
    # the certificate is not vacuous: directly extending the series by
    # 10000 terms past the truncation index adds less than epsilon
    for gamma in (0.5, 1.0, 1.5):
        m_hat = truncation_index(gamma, 128)
        extra = _error_probs(np.arange(m_hat + 1, m_hat + 10_001, dtype=float), gamma, 128)
        assert math.fsum(extra.tolist()) <= 1e-2


def test_costs_for_channel_ordering(std_channel, std_cost):
    assert 0.0 < std_cost.tau_good < std_cost.tau_bad
    assert math.isfinite(std_cost.tau_bad)
    assert std_cost.tau_diff > 0.0


def test_costs_random_channels():
    rng = np.random.default_rng(6)
    for _ in range(5):
        p = rng.uniform(0.1, 0.9)
        snr_bad = rng.uniform(0.1, 1.0)
        ch = ChannelSpec.from_snrs(p, snr_bad * rng.uniform(1.3, 10.0), snr_bad)
        cost = costs_for_channel(ch, RcspConfig(32))
        assert cost.tau_good < cost.tau_bad
