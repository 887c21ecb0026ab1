#!/usr/bin/env python3
"""Walk through the convex machinery that makes the optimum a 1-D problem.

The margin curve f(x) = x + 2 sqrt(2 pi) Q(x) e^{x^2/2} is strictly convex
with a single minimum; at any stationary policy both normalized margins
sqrt(n)(T - x_good) and sqrt(n)(T - x_bad) sit on a common level of this
curve.  The weighted spread of the two branch inverses is strictly
increasing in the level, which is why the stationary policy is unique.
"""

import numpy as np

from pilotgate import (
    ChannelSpec,
    curve_minimum,
    lower_inverse,
    margin_curve,
    margin_curve_curvature,
    upper_inverse,
    weighted_spread,
)

mn = curve_minimum()
print("curve minimum")
print(f"  x_star = {mn.x_star:.10f}")
print(f"  y_min  = {mn.y_min:.10f}")
print(f"  f(0)   = {margin_curve(0.0):.10f}   (= sqrt(2 pi))")

print("\nconvexity: second derivative on a coarse grid")
for x in (-6.0, -2.0, 0.0, 0.612, 2.0, 6.0):
    print(f"  f''({x:6.3f}) = {margin_curve_curvature(x):12.6f}")

print("\nbranch inverses: each level above the minimum is hit exactly twice")
for y in (2.25, 2.35, 2.5066, 3.0, 5.0):
    g, b = lower_inverse(y), upper_inverse(y)
    print(
        f"  level {y:7.4f}: g = {g:+9.5f}, b = {b:8.5f}, "
        f"round-trip errors {abs(margin_curve(g) - y):.1e} / {abs(margin_curve(b) - y):.1e}"
    )

print("\nweighted spread is strictly increasing and spans (0, inf)")
ch = ChannelSpec.from_snrs(0.5, 1.5, 0.5)
for y in np.concatenate([[mn.y_min + 1e-8], np.linspace(2.3, 6.0, 6)]):
    print(f"  spread(y = {y:9.6f}) = {weighted_spread(ch, y):.6e}")
