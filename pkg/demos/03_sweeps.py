#!/usr/bin/env python3
"""Reproduce the two standard sweeps and write their CSVs.

Sweep 1 varies the good/bad SNR ratio at equal state probabilities with
the average SNR pinned to 1: the further apart the states, the more a
trained go/no-go decision saves.  Sweep 2 varies the good-state
probability at fixed SNRs 1.5 / 0.5: the saving peaks at moderate
probabilities and vanishes toward both static extremes.

CSVs land in the current directory; render them with plot_sweeps.py.
"""

import numpy as np

from pilotgate import run_vary_probability, run_vary_ratio, write_rows

ratio_grid = [1.0 + 1e-6, 1.2, 1.5, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0]
prob_grid = list(np.round(np.linspace(0.02, 0.98, 25), 4))

print("sweep 1: SNR ratio at p_good = 0.5, average SNR 1, k = 128")
res = run_vary_ratio(ratio_grid, k=128)
print(f"  {'ratio':>8} {'n*':>4} {'T*':>9} {'tau*':>10} {'tau_ref':>10} {'saved':>9}")
for row in res.rows:
    print(
        f"  {row.sweep_value:8.3f} {row.n_star:4d} {row.t_star:9.4f} "
        f"{row.tau_star:10.3f} {row.tau_ref:10.3f} {row.reduction:9.3f}"
    )
write_rows(res.rows, "sweep_ratio.csv")
print("  -> sweep_ratio.csv")

print("\nsweep 2: good-state probability at SNRs 1.5 / 0.5, k = 128")
res = run_vary_probability(prob_grid, k=128)
peak = max(res.rows, key=lambda r: r.reduction)
for row in res.rows[:: max(1, len(res.rows) // 8)]:
    print(
        f"  p_good = {row.sweep_value:5.3f}: n* = {row.n_star:3d}, "
        f"saved = {row.reduction:8.3f} ({100 * row.reduction_fraction:5.2f}%)"
    )
print(f"  largest saving at p_good = {peak.sweep_value:.3f}: {peak.reduction:.3f} symbols")
write_rows(res.rows, "sweep_probability.csv")
print("  -> sweep_probability.csv")
