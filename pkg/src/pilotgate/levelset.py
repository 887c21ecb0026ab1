"""Convex level-set machinery behind the interior optimum.

At a stationary policy the two normalized pilot margins

    g = sqrt(n) (T - x_good),    b = sqrt(n) (T - x_bad),      g < b,

must sit on a common level of the strictly convex scalar curve

    margin_curve(x) = x + 2 sqrt(2 pi) Q(x) exp(x^2 / 2).

The curve has a single minimum near x = 0.612; every level y above the
minimum is hit exactly twice, once per branch.  Pairing the two branch
inverses gives the strictly increasing map

    weighted_spread(y) = (b(y) - g(y)) * (p_good e^{b(y)^2/2} + p_bad e^{g(y)^2/2}),

which sweeps (0, inf) as y rises from the minimum, so its root against
any positive constant is unique.  That root is what the optimizer solves
for.

The inverse branches are solved bracket-tight (to machine resolution, not
just to a residual tolerance): the optimizer recovers the pilot length
from the *difference* b - g, which near the curve minimum is far smaller
than either abscissa.
"""

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelSpec
from .roots import NumericalError
from .special import SQRT_2PI, scaled_mills

__all__ = [
    "CurveMinimum",
    "margin_curve",
    "margin_curve_prime",
    "margin_curve_curvature",
    "curve_minimum",
    "lower_inverse",
    "upper_inverse",
    "weighted_spread",
    "weighted_spread_prime",
]

# leftmost usable abscissa: the curve exceeds double range below ~ -38.6
_LEFT_EDGE = -37.5
_LOG_DOUBLE_MAX = math.log(np.finfo(float).max)
_BRENT_RTOL = 4.0 * np.finfo(float).eps


def margin_curve(x: float) -> float:
    """x + 2 sqrt(2 pi) Q(x) exp(x^2/2); strictly convex, minimum ~2.246 at x~0.612."""
    return x + 2.0 * SQRT_2PI * scaled_mills(x)


def margin_curve_prime(x: float) -> float:
    """First derivative 2 sqrt(2 pi) x Q(x) e^{x^2/2} - 1 (the constant terms cancel)."""
    return 2.0 * SQRT_2PI * x * scaled_mills(x) - 1.0


def margin_curve_curvature(x: float) -> float:
    """Second derivative 2 sqrt(2 pi) Q(x) e^{x^2/2} (x^2 + 1) - 2x; positive everywhere."""
    return 2.0 * SQRT_2PI * scaled_mills(x) * (x * x + 1.0) - 2.0 * x


@dataclass(frozen=True)
class CurveMinimum:
    """Argmin and minimum value of margin_curve."""

    x_star: float
    y_min: float


@functools.lru_cache(maxsize=1)
def curve_minimum() -> CurveMinimum:
    """Locate the curve minimum once (Newton on the derivative) and cache it."""
    x = 0.6
    for _ in range(100):
        d = margin_curve_prime(x)
        if abs(d) <= 1e-14:
            break
        x -= d / margin_curve_curvature(x)
    if abs(margin_curve_prime(x)) > 1e-13:
        raise NumericalError("curve_minimum: Newton failed to reach |f'| <= 1e-13")
    return CurveMinimum(x_star=x, y_min=margin_curve(x))


def _check_level(y: float) -> float:
    y = float(y)
    y_min = curve_minimum().y_min
    if not y > y_min:
        raise ValueError(f"level {y!r} is below the range of the curve (min {y_min})")
    return y


def lower_inverse(y: float) -> float:
    """The abscissa g < x_star with margin_curve(g) = y; strictly decreasing in y."""
    y = _check_level(y)
    x_star = curve_minimum().x_star
    step = 1.0
    lo = x_star - step
    while margin_curve(lo) < y:
        step *= 2.0
        lo = x_star - step
        if lo < _LEFT_EDGE:
            lo = _LEFT_EDGE
            if margin_curve(lo) < y:
                raise NumericalError(f"lower_inverse: level {y!r} beyond double range")
            break
    return float(brentq(lambda x: margin_curve(x) - y, lo, x_star, rtol=_BRENT_RTOL))


def upper_inverse(y: float) -> float:
    """The abscissa b > x_star with margin_curve(b) = y; strictly increasing in y.

    margin_curve(x) > x, so y itself bounds the root from above.
    """
    y = _check_level(y)
    x_star = curve_minimum().x_star
    hi = max(y, x_star + 1e-3)
    return float(brentq(lambda x: margin_curve(x) - y, x_star, hi, rtol=_BRENT_RTOL))


def weighted_spread(ch: ChannelSpec, y: float) -> float:
    """(b - g) * (p_good e^{b^2/2} + p_bad e^{g^2/2}) at the level-y branch pair.

    Strictly increasing in y, -> 0 at the curve minimum and -> inf with y.
    Assembled in log space; +inf is returned once the true value exceeds
    double range (root finding only needs the ordering up there).
    """
    y = _check_level(y)
    g = lower_inverse(y)
    b = upper_inverse(y)
    if b <= g:  # only at levels within rounding of the minimum
        return 0.0
    log_sum = np.logaddexp(
        math.log(ch.p_good) + 0.5 * b * b, math.log(ch.p_bad) + 0.5 * g * g
    )
    log_val = math.log(b - g) + float(log_sum)
    return math.exp(log_val) if log_val <= _LOG_DOUBLE_MAX else math.inf


def weighted_spread_prime(ch: ChannelSpec, y: float) -> float:
    """dy-derivative of weighted_spread, via the inverse-function rule on each branch."""
    y = _check_level(y)
    g = lower_inverse(y)
    b = upper_inverse(y)
    dg = 1.0 / margin_curve_prime(g)  # negative
    db = 1.0 / margin_curve_prime(b)  # positive
    eg = math.exp(0.5 * g * g)
    eb = math.exp(0.5 * b * b)
    weight = ch.p_good * eb + ch.p_bad * eg
    return (db - dg) * weight + (b - g) * (ch.p_good * b * eb * db + ch.p_bad * g * eg * dg)
