"""Per-state expected data-transmission length under incremental redundancy.

The transmitter keeps sending coded symbols until the receiver decodes a
k-bit message; under the sphere-packing model the probability that decoding
still fails after m received symbols at SNR gamma is

    P_m(gamma) = 1 - F_chi2(m)( m (1 + gamma) / 2^(2k/m) ).

The expected transmission length is then 1 + sum_m P_m(gamma).  The series
is summed up to a truncation index with a certified geometric (Chernoff)
tail below a configured budget epsilon, so the reported value is exact to
within epsilon.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .channel import ChannelSpec, TransmissionCost

__all__ = [
    "RcspConfig",
    "error_prob",
    "chernoff_ratio",
    "chernoff_tail",
    "truncation_index",
    "expected_data_usage",
    "costs_for_channel",
]

_LOG2 = math.log(2.0)
_UNDERFLOW_LOG = -690.0  # below this the chi-square argument is a hard 0


@dataclass(frozen=True)
class RcspConfig:
    """Message length in bits and truncation error budget for the series."""

    k: int
    epsilon: float = 1e-2

    def __post_init__(self):
        if self.k != int(self.k) or self.k < 1:
            raise ValueError(f"message length k must be a positive integer, got {self.k!r}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")


def _check_snr(gamma: float) -> float:
    gamma = float(gamma)
    if not (math.isfinite(gamma) and gamma > 0):
        raise ValueError(f"SNR must be positive and finite, got {gamma!r}")
    return gamma


def _error_probs(m: np.ndarray, gamma: float, k: int) -> np.ndarray:
    """P_m(gamma) for an array of symbol counts, overflow-safe.

    The argument m (1+gamma) 2^(-2k/m) is formed in log space: for small m
    the factor 2^(-2k/m) underflows (k = 128, m = 1 gives 2^-256) and the
    error probability is then exactly 1 in double precision.
    """
    m = np.asarray(m, dtype=float)
    log_arg = np.log(m * (1.0 + gamma)) - (2.0 * k / m) * _LOG2
    tiny = log_arg < _UNDERFLOW_LOG
    arg = np.where(tiny, 0.0, np.exp(np.where(tiny, 0.0, log_arg)))
    p = _sp.gammaincc(0.5 * m, 0.5 * arg)
    return np.where(tiny, 1.0, p)


def error_prob(m: int, gamma: float, k: int) -> float:
    """Decoding-error probability after m received symbols at SNR gamma."""
    if m != int(m) or m < 1:
        raise ValueError(f"symbol count m must be a positive integer, got {m!r}")
    gamma = _check_snr(gamma)
    if k != int(k) or k < 1:
        raise ValueError(f"message length k must be a positive integer, got {k!r}")
    return float(_error_probs(np.array([m], dtype=float), gamma, int(k))[0])


def chernoff_ratio(gamma: float) -> float:
    """The geometric ratio r = (1 + gamma/2) exp(-gamma/2); strictly inside (0, 1)."""
    gamma = _check_snr(gamma)
    return (1.0 + 0.5 * gamma) * math.exp(-0.5 * gamma)


def chernoff_tail(m_hat: int, gamma: float) -> float:
    """Closed-form geometric tail sum_{m > m_hat} r^(m/2) = r^((m_hat+1)/2) / (1 - sqrt(r))."""
    r = chernoff_ratio(gamma)
    sqrt_r = math.sqrt(r)
    return math.exp(0.5 * (m_hat + 1) * math.log(r)) / (1.0 - sqrt_r)


def truncation_index(gamma: float, k: int, epsilon: float = 1e-2) -> int:
    """Smallest m_hat at which the series may stop with certified error <= epsilon.

    Two conditions must hold: the chi-square argument slope test
    (1 + gamma) 2^(-2k/m_hat) > 1 + gamma/2, which makes the Chernoff bound
    applicable to every omitted term, and the geometric tail itself being
    at most epsilon.  Both are monotone in m_hat, so each yields a closed
    form that is then nudged to the exact smallest integer.
    """
    gamma = _check_snr(gamma)
    cfg = RcspConfig(k, epsilon)  # reuse the validation

    # condition 1: m > 2 k ln 2 / ln((1+gamma)/(1+gamma/2))
    slope = math.log((1.0 + gamma) / (1.0 + 0.5 * gamma))
    m1 = max(1, math.ceil(2.0 * cfg.k * _LOG2 / slope))
    while (1.0 + gamma) * math.exp(-2.0 * cfg.k * _LOG2 / m1) <= 1.0 + 0.5 * gamma:
        m1 += 1

    # condition 2: geometric tail <= epsilon
    r = chernoff_ratio(gamma)
    m2 = max(1, math.ceil(2.0 * math.log(cfg.epsilon * (1.0 - math.sqrt(r))) / math.log(r) - 1.0))
    while chernoff_tail(m2, gamma) > cfg.epsilon:
        m2 += 1
    while m2 > 1 and chernoff_tail(m2 - 1, gamma) <= cfg.epsilon:
        m2 -= 1

    return max(m1, m2)


def expected_data_usage(gamma: float, k: int, epsilon: float = 1e-2) -> float:
    """Expected data-transmission length 1 + sum_{m=1}^{m_hat} P_m(gamma).

    An upper-bound model of the true expected length whose truncation error
    is certified <= epsilon by the Chernoff tail (the sum is accumulated
    with compensated summation, so roundoff stays far below that budget).
    """
    m_hat = truncation_index(gamma, k, epsilon)
    terms = _error_probs(np.arange(1, m_hat + 1, dtype=float), float(gamma), int(k))
    return 1.0 + math.fsum(terms.tolist())


def costs_for_channel(ch: ChannelSpec, cfg: RcspConfig) -> TransmissionCost:
    """Per-state expected data lengths for a channel: tau at each state's SNR."""
    tau_good = expected_data_usage(ch.snr_good, cfg.k, cfg.epsilon)
    tau_bad = expected_data_usage(ch.snr_bad, cfg.k, cfg.epsilon)
    if not tau_good < tau_bad:
        raise RuntimeError(
            f"cost model violated tau_good < tau_bad: {tau_good} >= {tau_bad}"
        )
    return TransmissionCost(tau_good=tau_good, tau_bad=tau_bad)
