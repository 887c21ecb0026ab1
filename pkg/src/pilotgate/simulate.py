"""Monte Carlo simulation of the pilot / go-no-go / retransmit renewal process.

Each trial delivers one packet: draw a fresh channel state, spend n pilot
symbols, form the pilot mean Normal(x_state, 1/n), transmit if it clears
the threshold, otherwise repeat on a new block.  The data cost on "go" is
either the per-state expected length (``expected-cost``, which makes the
run an unbiased estimate of the analytic expected usage) or a sampled
stopping time from the decoding-error model (``sampled-stopping-time``).

Trials are processed in fixed-size chunks, each driven by its own RNG
stream derived from (seed, chunk index), so results are bit-identical for
a given seed no matter how the chunks are scheduled.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelSpec, PilotPolicy, TransmissionCost
from .rcsp import RcspConfig, _error_probs, costs_for_channel, truncation_index

__all__ = ["SimConfig", "SimResult", "simulate"]

logger = logging.getLogger(__name__)

_CHUNK = 1 << 16
_DATA_MODELS = ("expected-cost", "sampled-stopping-time")


@dataclass(frozen=True)
class SimConfig:
    """Trial count, RNG seed and data-cost model for a simulation run."""

    trials: int
    seed: int = 0
    data_model: str = "expected-cost"

    def __post_init__(self):
        if self.trials != int(self.trials) or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if self.seed != int(self.seed) or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.data_model not in _DATA_MODELS:
            raise ValueError(
                f"data_model must be one of {_DATA_MODELS}, got {self.data_model!r}"
            )


@dataclass(frozen=True)
class SimResult:
    """Empirical mean channel usage with its uncertainty and go statistics.

    The go rates estimate the per-state transmit probabilities
    Q(sqrt(n)(T - x_state)); they are NaN if a state never occurred.
    """

    mean_usage: float
    std_error: float
    attempts_per_packet: float
    go_rate_good: float
    go_rate_bad: float


class _StoppingTable:
    """Sampler for the data-transmission stopping time at one SNR.

    The raw per-m decoding-error curve is not guaranteed monotone, so the
    survival function is monotonized (running minimum), truncated at
    4x the certified index with the residual mass placed on the last bin.
    """

    def __init__(self, gamma: float, k: int, epsilon: float):
        m_hat = truncation_index(gamma, k, epsilon)
        m_max = 4 * m_hat
        raw = _error_probs(np.arange(1, m_max, dtype=float), gamma, k)
        survival = np.minimum.accumulate(raw)  # S(m) for m = 1 .. m_max-1
        pmf = np.empty(m_max)
        pmf[0] = 1.0 - survival[0]
        pmf[1:-1] = survival[:-1] - survival[1:]
        pmf[-1] = survival[-1]
        self._cdf = np.cumsum(pmf)
        self._cdf[-1] = 1.0
        self.mean = 1.0 + float(survival.sum())

    def sample(self, u: np.ndarray) -> np.ndarray:
        return np.searchsorted(self._cdf, u, side="right") + 1.0


def simulate(
    ch: ChannelSpec,
    cost: TransmissionCost | RcspConfig,
    pol: PilotPolicy,
    cfg: SimConfig,
) -> SimResult:
    """Run the renewal process for cfg.trials packets and aggregate usage.

    ``cost`` may be a TransmissionCost (enough for the expected-cost model)
    or an RcspConfig (required for sampled stopping times, from which the
    expected costs are also derived).  Deterministic for a fixed SimConfig.
    """
    n = float(pol.n)
    if n != int(n):
        raise ValueError(f"simulation needs an integer pilot length, got {pol.n!r}")
    n = int(n)
    t = pol.threshold
    if t == math.inf:
        raise ValueError("threshold +inf never transmits; usage would be unbounded")

    sampled = cfg.data_model == "sampled-stopping-time"
    if isinstance(cost, RcspConfig):
        rcsp_cfg = cost
        costs = costs_for_channel(ch, rcsp_cfg)
    else:
        rcsp_cfg = None
        costs = cost
    if sampled:
        if rcsp_cfg is None:
            raise ValueError("sampled-stopping-time needs an RcspConfig, not bare costs")
        table_good = _StoppingTable(ch.snr_good, rcsp_cfg.k, rcsp_cfg.epsilon)
        table_bad = _StoppingTable(ch.snr_bad, rcsp_cfg.k, rcsp_cfg.epsilon)

    always_go = n == 0 or t == -math.inf
    if n == 0 and math.isfinite(t):
        logger.info(
            "pilot length 0: no channel estimate exists, threshold %.6g is ignored "
            "and every attempt transmits",
            t,
        )

    rn = math.sqrt(n) if n > 0 else 0.0
    trials = cfg.trials
    totals = np.empty(trials)
    attempts_total = 0
    state_attempts = np.zeros(2, dtype=np.int64)  # [good, bad]
    state_gos = np.zeros(2, dtype=np.int64)

    pos = 0
    chunk_idx = 0
    while pos < trials:
        count = min(_CHUNK, trials - pos)
        rng = np.random.default_rng((cfg.seed, chunk_idx))
        usage = np.zeros(count)
        active = np.arange(count)
        while active.size:
            good = rng.random(active.size) < ch.p_good
            if always_go:
                go = np.ones(active.size, dtype=bool)
            else:
                pilot_mean = np.where(good, ch.x_good, ch.x_bad)
                pilot_mean = pilot_mean + rng.standard_normal(active.size) / rn
                go = pilot_mean >= t
            usage[active] += n
            attempts_total += active.size
            n_good = int(good.sum())
            state_attempts[0] += n_good
            state_attempts[1] += active.size - n_good
            state_gos[0] += int((go & good).sum())
            state_gos[1] += int((go & ~good).sum())

            done = active[go]
            good_done = good[go]
            if cfg.data_model == "expected-cost":
                usage[done] += np.where(good_done, costs.tau_good, costs.tau_bad)
            else:
                u = rng.random(done.size)
                lengths = np.empty(done.size)
                lengths[good_done] = table_good.sample(u[good_done])
                lengths[~good_done] = table_bad.sample(u[~good_done])
                usage[done] += lengths
            active = active[~go]
        totals[pos : pos + count] = usage
        pos += count
        chunk_idx += 1

    mean = float(totals.mean())
    std_error = float(totals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    rate_good = float(state_gos[0] / state_attempts[0]) if state_attempts[0] else math.nan
    rate_bad = float(state_gos[1] / state_attempts[1]) if state_attempts[1] else math.nan
    return SimResult(
        mean_usage=mean,
        std_error=std_error,
        attempts_per_packet=attempts_total / trials,
        go_rate_good=rate_good,
        go_rate_bad=rate_bad,
    )
