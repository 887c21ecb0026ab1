"""Safeguarded scalar root finding used by the level-set and policy solvers.

Newton steps are taken only while they stay inside a maintained sign-change
bracket; anything else (missing derivative, wild step, slow progress) falls
back to bisection, so convergence is guaranteed for continuous functions.
"""

import math

__all__ = ["NumericalError", "newton_bisection", "expand_bracket_left", "expand_bracket_right"]

_MAX_ITER = 200


class NumericalError(RuntimeError):
    """An iterative numerical procedure failed to converge within its budget."""


def newton_bisection(func, lo, hi, fprime=None, x0=None, ftol=1e-12, max_iter=_MAX_ITER):
    """Find x in [lo, hi] with |func(x)| <= ftol, given func(lo) and func(hi)
    of opposite sign.

    Uses Newton iterations from ``x0`` (midpoint if omitted) when ``fprime``
    is supplied, rejecting any step that leaves the current bracket in favor
    of a bisection step.  Raises NumericalError if the bracket is invalid or
    the iteration budget is exhausted.
    """
    flo = func(lo)
    if abs(flo) <= ftol:
        return lo
    fhi = func(hi)
    if abs(fhi) <= ftol:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise NumericalError(
            f"newton_bisection: no sign change on [{lo!r}, {hi!r}] "
            f"(f(lo)={flo!r}, f(hi)={fhi!r})"
        )
    sign = 1.0 if fhi > 0 else -1.0

    x = 0.5 * (lo + hi) if x0 is None else min(max(x0, lo), hi)
    for _ in range(max_iter):
        fx = func(x)
        if abs(fx) <= ftol:
            return x
        if sign * fx > 0:
            hi = x
        else:
            lo = x
        step_ok = False
        if fprime is not None:
            d = fprime(x)
            if d and math.isfinite(d):
                x_new = x - fx / d
                if lo < x_new < hi:
                    x = x_new
                    step_ok = True
        if not step_ok:
            x = 0.5 * (lo + hi)
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi), 1.0)):
            # bracket exhausted to machine resolution; accept the best point
            return x
    raise NumericalError(f"newton_bisection: no convergence in {max_iter} iterations")


def expand_bracket_left(func, start, step=1.0, factor=2.0, max_iter=_MAX_ITER):
    """Walk left from ``start`` in geometrically growing steps and return the
    first abscissa with func < 0; NumericalError if none is found in budget."""
    x = start
    for _ in range(max_iter):
        if func(x) < 0:
            return x
        x -= step
        step *= factor
    raise NumericalError("expand_bracket_left: no sign change found")


def expand_bracket_right(func, start, step=1.0, factor=2.0, max_iter=_MAX_ITER):
    """Walk right from ``start`` in geometrically growing steps and return the
    first abscissa with func > 0; NumericalError if none is found in budget."""
    x = start
    for _ in range(max_iter):
        if func(x) > 0:
            return x
        x += step
        step *= factor
    raise NumericalError("expand_bracket_right: no sign change found")
