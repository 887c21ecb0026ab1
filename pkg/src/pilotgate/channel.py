"""Two-state block-fading channel model and the expected-usage objective.

A transmitter repeatedly gains access to a block-fading channel whose
amplitude is either ``x_good`` or ``x_bad`` (probabilities ``p_good`` /
``p_bad``, independent across blocks).  Each access it spends ``n`` pilot
symbols; the receiver averages them (the mean is Normal(x, 1/n)) and
feeds back "go" when the average clears a threshold ``T``.  On "go" the
data transmission costs ``tau_good`` or ``tau_bad`` expected symbols
depending on the true state; on "no-go" everything repeats on a fresh
block.

``expected_usage`` is the resulting expected total symbol count per
delivered packet,

    tau_bar(n, T) = (n + p_bad * Q_B * tau_diff) / (p_good * Q_G + p_bad * Q_B)
                    + tau_good,

with Q_G = Q(sqrt(n) (T - x_good)) and Q_B = Q(sqrt(n) (T - x_bad)).
This module also provides its exact gradient and Hessian in (T, n), which
drive the policy optimizer.
"""

import math
from dataclasses import dataclass

import numpy as np

from .special import SQRT_2PI, q_function

__all__ = [
    "ChannelSpec",
    "TransmissionCost",
    "PilotPolicy",
    "expected_usage",
    "reference_usage",
    "potential_reduction",
    "gradient",
    "hessian",
]


@dataclass(frozen=True)
class ChannelSpec:
    """Two-state fading statistics: state probabilities and sqrt-SNR amplitudes.

    The good-state SNR is ``x_good**2``, the bad-state SNR ``x_bad**2``.
    Degenerate channels (a state with probability 0 or 1, or equal
    amplitudes) are rejected: they need no channel selection at all.
    """

    p_good: float
    p_bad: float
    x_good: float
    x_bad: float

    def __post_init__(self):
        for name in ("p_good", "p_bad", "x_good", "x_bad"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v)):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
        if not 0.0 < self.p_good < 1.0:
            raise ValueError(f"p_good must lie strictly inside (0, 1), got {self.p_good}")
        if abs(self.p_good + self.p_bad - 1.0) > 1e-12:
            raise ValueError(
                f"state probabilities must sum to 1, got {self.p_good} + {self.p_bad}"
            )
        if not self.x_good > self.x_bad > 0.0:
            raise ValueError(
                f"amplitudes must satisfy x_good > x_bad > 0, got "
                f"x_good={self.x_good}, x_bad={self.x_bad}"
            )

    @classmethod
    def from_snrs(cls, p_good: float, snr_good: float, snr_bad: float) -> "ChannelSpec":
        """Build from linear SNRs (the squared amplitudes)."""
        if min(snr_good, snr_bad) <= 0:
            raise ValueError("SNRs must be positive")
        return cls(p_good, 1.0 - p_good, math.sqrt(snr_good), math.sqrt(snr_bad))

    @property
    def snr_good(self) -> float:
        return self.x_good * self.x_good

    @property
    def snr_bad(self) -> float:
        return self.x_bad * self.x_bad


@dataclass(frozen=True)
class TransmissionCost:
    """Expected data-transmission length (symbols) in each channel state."""

    tau_good: float
    tau_bad: float

    def __post_init__(self):
        ok = (
            math.isfinite(self.tau_good)
            and math.isfinite(self.tau_bad)
            and 0.0 < self.tau_good < self.tau_bad
        )
        if not ok:
            raise ValueError(
                f"costs must satisfy 0 < tau_good < tau_bad, got "
                f"tau_good={self.tau_good}, tau_bad={self.tau_bad}"
            )

    @property
    def tau_diff(self) -> float:
        return self.tau_bad - self.tau_good


@dataclass(frozen=True)
class PilotPolicy:
    """A (pilot length, go/no-go threshold) pair.

    ``n`` is real-valued during analysis and an integer in final policies.
    ``threshold`` is an extended real: finite, or -inf for "always
    transmit".  With n = 0 no pilots are sent and the threshold carries no
    meaning (transmission is unconditional).
    """

    n: float
    threshold: float

    def __post_init__(self):
        if not (math.isfinite(self.n) and self.n >= 0.0):
            raise ValueError(f"pilot length must be finite and >= 0, got {self.n!r}")
        if math.isnan(self.threshold):
            raise ValueError("threshold must not be NaN")


def reference_usage(ch: ChannelSpec, cost: TransmissionCost) -> float:
    """Expected usage with no training at all: p_good*tau_good + p_bad*tau_bad."""
    return ch.p_good * cost.tau_good + ch.p_bad * cost.tau_bad


def potential_reduction(ch: ChannelSpec, cost: TransmissionCost) -> float:
    """Upper bound p_bad * tau_diff on the usage reduction any policy can achieve."""
    return ch.p_bad * cost.tau_diff


def expected_usage(ch: ChannelSpec, cost: TransmissionCost, pol: PilotPolicy) -> float:
    """Expected total channel usage (pilots + data) per delivered packet.

    Special cases: n = 0 gives the no-training reference regardless of the
    threshold; threshold -inf gives n + reference; threshold +inf with
    n > 0 never transmits, so usage diverges and +inf is returned (the
    same sentinel is used when both go probabilities underflow).
    """
    n, t = float(pol.n), pol.threshold
    if n == 0.0:
        return reference_usage(ch, cost)
    if t == -math.inf:
        return n + reference_usage(ch, cost)
    if t == math.inf:
        return math.inf
    rn = math.sqrt(n)
    q_go_good = q_function(rn * (t - ch.x_good))
    q_go_bad = q_function(rn * (t - ch.x_bad))
    denom = ch.p_good * q_go_good + ch.p_bad * q_go_bad
    if denom == 0.0:
        return math.inf
    return (n + ch.p_bad * q_go_bad * cost.tau_diff) / denom + cost.tau_good


def _phi(u: float) -> float:
    return math.exp(-0.5 * u * u) / SQRT_2PI


def _first_order_parts(ch, cost, n, t):
    """Numerator/denominator of tau_bar and their first partials in (T, n)."""
    rn = math.sqrt(n)
    g = rn * (t - ch.x_good)
    b = rn * (t - ch.x_bad)
    phi_g, phi_b = _phi(g), _phi(b)
    q_g, q_b = q_function(g), q_function(b)
    td = cost.tau_diff

    num = n + ch.p_bad * q_b * td
    den = ch.p_good * q_g + ch.p_bad * q_b
    num_t = -rn * phi_b * ch.p_bad * td
    den_t = -rn * (ch.p_good * phi_g + ch.p_bad * phi_b)
    num_n = 1.0 - ch.p_bad * td * phi_b * b / (2.0 * n)
    den_n = -(ch.p_good * phi_g * g + ch.p_bad * phi_b * b) / (2.0 * n)
    return g, b, phi_g, phi_b, num, den, num_t, den_t, num_n, den_n


def _check_interior(n: float, t: float) -> None:
    if not (math.isfinite(n) and n > 0.0):
        raise ValueError(f"derivatives need n > 0 (the n-derivative has a 1/sqrt(n) term), got n={n!r}")
    if not math.isfinite(t):
        raise ValueError(f"derivatives need a finite threshold, got {t!r}")


def gradient(ch: ChannelSpec, cost: TransmissionCost, n: float, t: float) -> tuple[float, float]:
    """Exact partial derivatives (d tau_bar/dT, d tau_bar/dn) at an interior point.

    Closed forms obtained by propagating Q'(u) = -phi(u) through the usage
    ratio; validated against central finite differences in the test suite.
    Evaluated in the form (num_x - (num/den) den_x) / den, which survives
    thresholds deep in the never-transmit regime where den**2 underflows.
    """
    _check_interior(n, t)
    (_, _, _, _, num, den, num_t, den_t, num_n, den_n) = _first_order_parts(ch, cost, n, t)
    if den == 0.0:
        raise ValueError("gradient undefined: the transmit probability underflows to 0")
    ratio = num / den
    return (num_t - ratio * den_t) / den, (num_n - ratio * den_n) / den


def hessian(ch: ChannelSpec, cost: TransmissionCost, n: float, t: float) -> np.ndarray:
    """Exact 2x2 Hessian of tau_bar in (T, n) order.

    The two mixed partials are evaluated independently (d/dn of the
    T-derivative and d/dT of the n-derivative); their agreement is a
    built-in transcription check.
    """
    _check_interior(n, t)
    (g, b, phi_g, phi_b, num, den, num_t, den_t, num_n, den_n) = _first_order_parts(
        ch, cost, n, t
    )
    rn = math.sqrt(n)
    pg, pb, td = ch.p_good, ch.p_bad, cost.tau_diff

    # second partials of the go probabilities Q(sqrt(n)(T - x)), u in {g, b}:
    #   d2Q/dT2     = n u phi(u)
    #   d2Q/dT dn   = phi(u) (u^2 - 1) / (2 sqrt(n))
    #   d2Q/dn2     = u phi(u) (u^2 + 1) / (4 n^2)
    qg_tt = n * g * phi_g
    qb_tt = n * b * phi_b
    qg_tn = phi_g * (g * g - 1.0) / (2.0 * rn)
    qb_tn = phi_b * (b * b - 1.0) / (2.0 * rn)
    qg_nn = g * phi_g * (g * g + 1.0) / (4.0 * n * n)
    qb_nn = b * phi_b * (b * b + 1.0) / (4.0 * n * n)

    num_tt = pb * td * qb_tt
    den_tt = pg * qg_tt + pb * qb_tt
    num_tn = pb * td * qb_tn
    den_tn = pg * qg_tn + pb * qb_tn
    num_nn = pb * td * qb_nn
    den_nn = pg * qg_nn + pb * qb_nn

    if den == 0.0:
        raise ValueError("hessian undefined: the transmit probability underflows to 0")
    ratio = num / den
    grad_t = (num_t - ratio * den_t) / den
    grad_n = (num_n - ratio * den_n) / den
    cross = (num_t * den_n - num_n * den_t) / den

    h_tt = (num_tt - ratio * den_tt) / den - 2.0 * den_t * grad_t / den
    h_tn = (num_tn + cross - ratio * den_tn) / den - 2.0 * den_n * grad_t / den
    h_nt = (num_tn - cross - ratio * den_tn) / den - 2.0 * den_t * grad_n / den
    h_nn = (num_nn - ratio * den_nn) / den - 2.0 * den_n * grad_n / den
    return np.array([[h_tt, h_tn], [h_nt, h_nn]])
