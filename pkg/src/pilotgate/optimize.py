"""Optimal pilot length and go/no-go threshold for a two-state channel.

The real-valued interior optimum (n_hat, T_hat) of the expected-usage
objective is found through a single scalar equation: at stationarity the
weighted spread of the level-set branch pair must equal the channel
constant

    C = p_good p_bad tau_diff (x_good - x_bad)^2 / (2 sqrt(2 pi)),

and weighted_spread is strictly increasing, so the level y solving
weighted_spread(y) = C is unique and bracketable.  The branch pair (g, b)
at that level then yields

    n_hat = ((g - b) / (x_good - x_bad))^2,
    T_hat = (g x_bad - b x_good) / (g - b).

The optimal integer policy follows in three steps: solve for n_hat, try
the two neighboring integers with their per-n optimal thresholds, keep the
cheaper one.  A brute-force grid oracle is included for verification.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from .channel import (
    ChannelSpec,
    PilotPolicy,
    TransmissionCost,
    expected_usage,
    gradient,
    hessian,
    reference_usage,
)
from .levelset import (
    curve_minimum,
    lower_inverse,
    margin_curve_curvature,
    upper_inverse,
    weighted_spread,
    weighted_spread_prime,
)
from .roots import (
    NumericalError,
    expand_bracket_left,
    expand_bracket_right,
    newton_bisection,
)
from .special import SQRT_2PI, log_scaled_mills

__all__ = [
    "StationaryPoint",
    "OptimalPolicy",
    "solve_real_optimum",
    "optimal_threshold_for_n",
    "optimize",
    "grid_search_oracle",
]

_LEVEL_CAP = 1e6  # bracket expansion beyond this level signals a defect


@dataclass(frozen=True)
class StationaryPoint:
    """The unique interior stationary point of the usage objective.

    ``g_hat`` / ``b_hat`` are the normalized margins sqrt(n)(T - x) for the
    good and bad amplitudes, ``level`` their common value on the margin
    curve, ``tau_bar`` the usage there.
    """

    n_hat: float
    t_hat: float
    g_hat: float
    b_hat: float
    level: float
    tau_bar: float


@dataclass(frozen=True)
class OptimalPolicy:
    """Best integer pilot length with its threshold and achieved usage."""

    n_star: int
    t_star: float
    tau_bar_star: float
    reduction: float


def _stationarity_constant(ch: ChannelSpec, cost: TransmissionCost) -> float:
    return ch.p_good * ch.p_bad * cost.tau_diff * (ch.x_good - ch.x_bad) ** 2 / (2.0 * SQRT_2PI)


# below this offset from the curve minimum the branch pair is recovered from
# the local quadratic model y ~ y_min + curvature/2 (x - x_star)^2 instead of
# the inverse solvers (the level itself has no floating resolution left there)
_DELTA_QUADRATIC = 1e-12


def _spread_at_offset(ch: ChannelSpec, delta: float) -> float:
    """weighted_spread evaluated at level y_min + delta, valid for any delta > 0."""
    minimum = curve_minimum()
    if delta <= _DELTA_QUADRATIC:
        half = math.sqrt(2.0 * delta / margin_curve_curvature(minimum.x_star))
        return 2.0 * half * math.exp(0.5 * minimum.x_star**2)
    return weighted_spread(ch, minimum.y_min + delta)


def _spread_prime_at_offset(ch: ChannelSpec, delta: float) -> float:
    minimum = curve_minimum()
    if delta <= _DELTA_QUADRATIC:
        curv = margin_curve_curvature(minimum.x_star)
        return math.exp(0.5 * minimum.x_star**2) * math.sqrt(2.0 / (curv * delta))
    return weighted_spread_prime(ch, minimum.y_min + delta)


def _solve_level_offset(ch: ChannelSpec, target: float) -> float:
    """Offset delta > 0 with weighted_spread(y_min + delta) = target.

    Solved on log(delta): for a nearly static channel the root sits within
    rounding distance of the curve minimum, where the level itself has no
    floating resolution left but its offset still does.
    """

    def func(t: float) -> float:
        return _spread_at_offset(ch, math.exp(t)) - target

    def fprime(t: float) -> float:
        delta = math.exp(t)
        return _spread_prime_at_offset(ch, delta) * delta

    ftol = 1e-12 * max(1.0, target)
    lo, hi = math.log(1e-9), 0.0
    while func(hi) < 0.0:
        hi += math.log(2.0)
        if math.exp(hi) > _LEVEL_CAP:
            raise NumericalError("level bracketing failed below the expansion cap")
    while func(lo) > 0.0:
        lo -= 4.0 * math.log(2.0)
        if lo < math.log(1e-300):
            # target below the spread one representable tick above the
            # minimum: the channel is numerically static, the optimum has n ~ 0
            return math.exp(lo)
    t = newton_bisection(func, lo, hi, fprime=fprime, ftol=ftol)
    return math.exp(t)


def _newton_refine(ch, cost, n, t, max_iter=40):
    """Local 2-D Newton polish of the gradient system, damped to keep n > 0."""
    for _ in range(max_iter):
        d_t, d_n = gradient(ch, cost, n, t)
        h = hessian(ch, cost, n, t)
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        if not (math.isfinite(det) and det > 0.0):
            break
        step_t = (h[1, 1] * d_t - h[0, 1] * d_n) / det
        step_n = (h[0, 0] * d_n - h[1, 0] * d_t) / det
        damp = 1.0
        while n - damp * step_n <= 0.0:
            damp *= 0.5
            if damp < 1e-12:
                return n, t
        t -= damp * step_t
        n -= damp * step_n
        if max(abs(step_t), abs(step_n)) <= 1e-14 * (1.0 + abs(t) + n):
            break
    return n, t


def solve_real_optimum(
    ch: ChannelSpec, cost: TransmissionCost, refine: bool = True
) -> StationaryPoint:
    """Solve for the unique real-valued interior optimum (n_hat, T_hat).

    The scalar level equation provides a globally convergent route (the
    spread map is strictly increasing); with ``refine`` a 2-D Newton polish
    is run afterwards and required to agree to 1e-8, which both validates
    the closed-form derivatives and pushes the gradient to machine level.
    """
    target = _stationarity_constant(ch, cost)
    delta = _solve_level_offset(ch, target)
    minimum = curve_minimum()
    sep = ch.x_good - ch.x_bad
    level = minimum.y_min + delta
    if delta <= _DELTA_QUADRATIC:
        half = math.sqrt(2.0 * delta / margin_curve_curvature(minimum.x_star))
        g = minimum.x_star - half
        b = minimum.x_star + half
        n_hat = (2.0 * half / sep) ** 2
        t_hat = minimum.x_star * sep / (2.0 * half) + 0.5 * (ch.x_good + ch.x_bad)
    else:
        g = lower_inverse(level)
        b = upper_inverse(level)
        n_hat = ((g - b) / sep) ** 2
        t_hat = (g * ch.x_bad - b * ch.x_good) / (g - b)

    if refine and n_hat > 1e-3:
        n_ref, t_ref = _newton_refine(ch, cost, n_hat, t_hat)
        disagree = abs(n_ref - n_hat) > 1e-8 * (1.0 + n_hat) or abs(t_ref - t_hat) > 1e-8 * (
            1.0 + abs(t_hat)
        )
        if disagree and delta > _DELTA_QUADRATIC:
            raise NumericalError(
                "level-equation solution and Newton refinement disagree: "
                f"(n, T) = ({n_hat}, {t_hat}) vs ({n_ref}, {t_ref})"
            )
        n_hat, t_hat = n_ref, t_ref
        rn = math.sqrt(n_hat)
        g = rn * (t_hat - ch.x_good)
        b = rn * (t_hat - ch.x_bad)

    tau = expected_usage(ch, cost, PilotPolicy(n=n_hat, threshold=t_hat))
    return StationaryPoint(
        n_hat=float(n_hat),
        t_hat=float(t_hat),
        g_hat=float(g),
        b_hat=float(b),
        level=float(level),
        tau_bar=float(tau),
    )


def _threshold_residual(ch, cost, n, t):
    """Stationarity residual in T for fixed n, stable over the whole real line.

    Rearranged so that both tails are finite:

        residual(T) = n - p_good p_bad tau_diff
                      * (mills(g) - mills(b)) / (p_good e^{b^2/2} + p_bad e^{g^2/2})

    with mills the scaled Mills ratio Q(u) e^{u^2/2}.  The residual has the
    sign of the T-derivative of the usage, tends to n - p_good*tau_diff at
    T -> -inf and to n at T -> +inf.
    """
    rn = math.sqrt(n)
    g = rn * (t - ch.x_good)
    b = rn * (t - ch.x_bad)
    log_mg = log_scaled_mills(g)
    log_mb = log_scaled_mills(b)
    # mills is strictly decreasing and g < b, so the difference is positive;
    # if it rounds away entirely the second term vanishes and n is returned
    dlm = log_mb - log_mg
    if dlm >= -1e-16:
        return float(n)
    log_num = log_mg + math.log1p(-math.exp(dlm))
    log_den = np.logaddexp(
        math.log(ch.p_good) + 0.5 * b * b, math.log(ch.p_bad) + 0.5 * g * g
    )
    return n - ch.p_good * ch.p_bad * cost.tau_diff * math.exp(log_num - float(log_den))


def optimal_threshold_for_n(ch: ChannelSpec, cost: TransmissionCost, n: int) -> float:
    """Globally optimal threshold for a fixed integer pilot length.

    For n = 0 the threshold is irrelevant (0.0 is returned by convention).
    A finite stationary threshold exists iff n < p_good * tau_diff — below
    that the usage decreases from its T -> -inf limit before rising again,
    and the unique stationary point is the global minimum; at or above it
    the usage is strictly increasing in T and -inf ("always transmit") is
    optimal.
    """
    if n != int(n) or n < 0:
        raise ValueError(f"pilot length must be a nonnegative integer, got {n!r}")
    n = int(n)
    if n == 0:
        return 0.0
    if n >= ch.p_good * cost.tau_diff:
        return -math.inf

    res = lambda t: _threshold_residual(ch, cost, n, t)
    step = max(1.0, ch.x_good - ch.x_bad)
    lo = expand_bracket_left(res, ch.x_bad, step=step)
    hi = expand_bracket_right(res, ch.x_good, step=step)
    t = newton_bisection(res, lo, hi, ftol=1e-12 * max(1.0, n))
    # polish on the actual derivative: guarantees d tau/dT ~ 0 to machine level
    for _ in range(3):
        d_t, _ = gradient(ch, cost, n, t)
        h_tt = hessian(ch, cost, n, t)[0, 0]
        if not (math.isfinite(d_t) and math.isfinite(h_tt) and h_tt > 0.0):
            break
        step_t = d_t / h_tt
        if not math.isfinite(step_t) or abs(step_t) > 1.0:
            break
        t -= step_t
        if abs(step_t) <= 1e-15 * max(1.0, abs(t)):
            break
    return t


def optimize(ch: ChannelSpec, cost: TransmissionCost) -> OptimalPolicy:
    """Best integer policy: solve the real optimum, then compare its integer
    neighbors under their own optimal thresholds.

    Ties within 1e-12 go to the smaller pilot length (fewer pilots at equal
    cost).
    """
    sp = solve_real_optimum(ch, cost)
    candidates = sorted({math.floor(sp.n_hat), math.ceil(sp.n_hat)})

    best = None
    for n in candidates:
        t = optimal_threshold_for_n(ch, cost, n)
        tau = expected_usage(ch, cost, PilotPolicy(n=float(n), threshold=t))
        if best is None or tau < best[2] - 1e-12:
            best = (n, t, tau)
    n_star, t_star, tau_star = best
    ref = reference_usage(ch, cost)
    return OptimalPolicy(
        n_star=int(n_star),
        t_star=float(t_star),
        tau_bar_star=float(tau_star),
        reduction=float(ref - tau_star),
    )


def grid_search_oracle(
    ch: ChannelSpec,
    cost: TransmissionCost,
    n_max: int,
    t_lo: float,
    t_hi: float,
    t_steps: int,
) -> tuple[int, float, float]:
    """Exhaustive minimization of expected usage over an (n, T) grid.

    Scans n in {0, ..., n_max} against t_steps equally spaced thresholds in
    [t_lo, t_hi] plus the -inf (always transmit) column.  Ties break toward
    the smallest n, then the smallest threshold, independent of how the
    grid might be partitioned.  Verification helper, deliberately separate
    from the analytic solver.
    """
    if n_max < 1 or t_steps < 2 or not t_lo < t_hi:
        raise ValueError("need n_max >= 1, t_steps >= 2 and t_lo < t_hi")
    ns = np.arange(0, n_max + 1, dtype=float)
    ts = np.concatenate(([-np.inf], np.linspace(t_lo, t_hi, t_steps)))
    rn = np.sqrt(ns)[:, None]
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        q_good = _sp.ndtr(-(rn * (ts[None, :] - ch.x_good)))
        q_bad = _sp.ndtr(-(rn * (ts[None, :] - ch.x_bad)))
        den = ch.p_good * q_good + ch.p_bad * q_bad
        tau = (ns[:, None] + ch.p_bad * q_bad * cost.tau_diff) / den + cost.tau_good
        tau = np.where(den > 0.0, tau, np.inf)
    tau[0, :] = reference_usage(ch, cost)  # n = 0 ignores the threshold entirely
    flat = int(np.argmin(tau))  # first occurrence: smallest n, then smallest T
    i, j = divmod(flat, ts.size)
    return int(ns[i]), float(ts[j]), float(tau[i, j])
