#!/usr/bin/env python3
"""Render the sweep CSVs produced by 03_sweeps.py (or the CLI) as figures.

Usage:
    python demos/03_sweeps.py
    python demos/plot_sweeps.py [sweep_ratio.csv] [sweep_probability.csv]

Plotting stays out of the library itself; this is the whole recipe.
"""

import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pilotgate import read_rows


def plot(csv_path, xlabel, out_png, logx=False):
    rows = read_rows(csv_path)
    x = [r.sweep_value for r in rows]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(7, 7), sharex=True)
    top.plot(x, [r.tau_star for r in rows], "o-", label="optimized go/no-go")
    top.plot(x, [r.tau_ref for r in rows], "s--", label="always transmit")
    top.set_ylabel("expected channel usage (symbols)")
    top.legend()
    top.grid(alpha=0.3)
    bottom.plot(x, [r.n_star for r in rows], "d-", color="tab:green")
    bottom.set_ylabel("optimal pilot length n*")
    bottom.set_xlabel(xlabel)
    bottom.grid(alpha=0.3)
    if logx:
        bottom.set_xscale("log")
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    print(f"wrote {out_png}")


def main(argv):
    ratio_csv = argv[1] if len(argv) > 1 else "sweep_ratio.csv"
    prob_csv = argv[2] if len(argv) > 2 else "sweep_probability.csv"
    plot(ratio_csv, "SNR ratio (good / bad)", "sweep_ratio.png", logx=True)
    plot(prob_csv, "good-state probability", "sweep_probability.png")


if __name__ == "__main__":
    main(sys.argv)
